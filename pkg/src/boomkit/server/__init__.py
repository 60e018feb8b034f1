from .app import create_app, downsample_indices
from .store import Job, Store

__all__ = ["create_app", "downsample_indices", "Job", "Store"]
