"""Service-kiosk dialogue engine: topic scripts, keyword spotting, a JSON
knowledge base, easy-language/translation adaptation, a pure session state
machine, and a simulated robot driven through a gateway service and CLI."""

__version__ = "0.1.0"
