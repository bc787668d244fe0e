from .app import create_app
from .jobs import JobQueue, QueueFull
from .store import ArtifactRef, NotFound, ProjectStore, StorageFull, StoredResult

__all__ = [
    "create_app",
    "JobQueue",
    "QueueFull",
    "ArtifactRef",
    "NotFound",
    "ProjectStore",
    "StorageFull",
    "StoredResult",
]
