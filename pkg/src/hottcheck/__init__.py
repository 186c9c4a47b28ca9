"""hottcheck: a batch proof checker for a small homotopy type theory.

The kernel lives in syntax / values / evaluate / typecheck / hits; the
frontend (lexer, parser, elaborate, modules) turns named surface files
into kernel declarations, and cli wires it all up.
"""

__version__ = "0.1.0"
