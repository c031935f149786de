"""Paths to packaged data files (dataset, corpus, templates, transcripts)."""

from importlib import resources


def data_path(*parts: str) -> str:
    """Absolute path of a packaged data file."""
    return str(resources.files("graphqa").joinpath("data", *parts))
