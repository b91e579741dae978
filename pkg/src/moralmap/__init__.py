"""moralmap: geospatial analytics over moral-frame-annotated social media corpora."""

__version__ = "0.1.0"
