"""
Serverless entry point for the qwonder Flask service
The engine configuration is loaded once per cold start, before the first request.
"""
import logging
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app import app  # noqa: E402
from qwonder.engine_config import EngineConfig  # noqa: E402

logger = logging.getLogger(__name__)

config = EngineConfig.get_all_config()
logger.info(f"Serverless handler ready: step budget {config['step_budget']}, "
            f"cache size {config['cache_size']}, horizon {config['default_horizon']}")

__all__ = ['app', 'config']
