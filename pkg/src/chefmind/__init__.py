"""ChefMind: hybrid recipe recommendation engine.

Combines rule-based intent analysis, knowledge-graph candidate screening,
dense-vector fragment retrieval, and an LLM integration layer behind a
library API, an HTTP service, and a CLI.
"""

__version__ = "0.1.0"
