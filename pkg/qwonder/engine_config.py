"""
Engine Configuration Manager
Loads rewriting budgets, cache sizes and logging level from environment
variables or the config file
"""
import os
import json
import logging

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

DEFAULTS = {
    'step_budget': 1_000_000,
    'cache_size': 200_000,
    'default_horizon': 6,
    'log_level': 'INFO',
}

ENV_VARS = {
    'step_budget': 'QWONDER_STEP_BUDGET',
    'cache_size': 'QWONDER_CACHE_SIZE',
    'default_horizon': 'QWONDER_DEFAULT_HORIZON',
    'log_level': 'QWONDER_LOG_LEVEL',
}


class EngineConfig:
    """Manages engine configuration"""

    _config = None
    _config_file = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                                'config', 'qwonder_config.json')

    @classmethod
    def _config_path(cls):
        return os.environ.get('QWONDER_CONFIG_FILE', cls._config_file)

    @classmethod
    def _load_config(cls):
        """Load configuration: environment first, then config file, then defaults"""
        if cls._config is not None:
            return cls._config

        load_dotenv()
        file_config = {}
        path = cls._config_path()
        if os.path.exists(path):
            try:
                with open(path, 'r', encoding='utf-8') as f:
                    file_config = json.load(f)
            except Exception as e:
                logger.warning(f"Failed to load config file {path}: {e}")

        config = {}
        for key, default in DEFAULTS.items():
            raw = os.environ.get(ENV_VARS[key])
            if raw is None or raw == '':
                raw = file_config.get(key, default)
            config[key] = cls._coerce(key, raw, default)

        cls._config = config
        return config

    @staticmethod
    def _coerce(key, raw, default):
        if isinstance(default, int):
            try:
                value = int(raw)
            except (TypeError, ValueError):
                logger.warning(f"Invalid value {raw!r} for {key}, using {default}")
                return default
            if value <= 0:
                logger.warning(f"Non-positive value {value} for {key}, using {default}")
                return default
            return value
        value = str(raw).upper()
        if value not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            logger.warning(f"Unknown log level {raw!r}, using {default}")
            return default
        return value

    @classmethod
    def get_step_budget(cls):
        """Maximum number of rewrite steps for one normal-form computation"""
        return cls._load_config()['step_budget']

    @classmethod
    def get_cache_size(cls):
        return cls._load_config()['cache_size']

    @classmethod
    def get_default_horizon(cls):
        return cls._load_config()['default_horizon']

    @classmethod
    def get_log_level(cls):
        return cls._load_config()['log_level']

    @classmethod
    def get_all_config(cls):
        """Get all configuration as dictionary"""
        return dict(cls._load_config())

    @classmethod
    def save_config(cls, config_data):
        """Save configuration to the JSON file and reload"""
        path = cls._config_path()
        try:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(config_data, f, indent=2)
            cls._config = None
            cls._load_config()
            logger.info(f"Engine configuration saved to {path}")
            return True
        except Exception as e:
            logger.error(f"Failed to save config: {e}")
            return False

    @classmethod
    def reload_config(cls):
        """Force reload configuration (useful after env changes)"""
        cls._config = None
        return cls._load_config()
