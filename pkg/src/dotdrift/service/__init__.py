"""Challenge-serving HTTP service: config, record store, FastAPI app."""

from .app import create_app
from .config import ServiceConfig, load_config
from .store import ChallengeStore, VerifyResult

__all__ = ["create_app", "ServiceConfig", "load_config", "ChallengeStore", "VerifyResult"]
