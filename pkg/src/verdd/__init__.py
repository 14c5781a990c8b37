"""Dictionary engineering backend for small-language lexicography.

Provides a lexeme/relation store with full revision history, a finite-state
transducer engine for paradigm generation, orthography repair on import,
searchable bulk verification, and print/CSV/XML exports, all behind an HTTP
API and an operations CLI.
"""

__version__ = "0.1.0"
