/** Parses X. */ @Deprecated class P {}
