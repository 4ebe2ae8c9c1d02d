"""Order-aware tweet preprocessing and ensemble hate-speech classification."""

__version__ = "0.1.0"
