"""Video ingestion adapter producing landmark bundles for dfsuite."""
__version__ = "0.1.0"
