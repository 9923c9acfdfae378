"""Golden corpus: input documents, the command lines run on them, and expected reports."""
