/** Shared fixture policy used by the UI tests. */

export const POLICY_BODY =
  "The data controller is Example GmbH,\nExample Str. 1, 10115 Berlin, Germany.\n" +
  "We process contact data for account management.\n" +
  "You have the right to access, rectification, erasure, restriction, " +
  "portability and objection.\n" +
  "You may withdraw your consent at any time.";

/** Offsets of the fixture's controller name, used as the stock suggestion. */
export const CONTROLLER_START = POLICY_BODY.indexOf("Example GmbH");
export const CONTROLLER_END = CONTROLLER_START + "Example GmbH".length;
