import logging
import sys
import json
import os

from dotenv import load_dotenv
from errors import ConfigError

logging.basicConfig(
    level=logging.INFO,  # Default to INFO level
    format='%(filename)s:%(lineno)d | %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)
logger = logging.getLogger("utils")

# SCALEMODEL_SEED may come from a .env file
load_dotenv()

workingDir = os.path.dirname(os.path.abspath(__file__))
config_path = os.path.join(workingDir, "config.json")

default_config = {
    "projectName": "scalemodel",
    "trials": 100,
    "seed": 0,
    "workers": 1,
    "logLevel": "INFO"
}

def load_config():
    config = None

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            config = json.load(f)
    except Exception as e:
        logger.error(f"Error loading config: {e}")
        config = dict(default_config)

        try:
            with open(config_path, "w", encoding="utf-8") as f:
                json.dump(config, f, indent=2)
        except OSError as e:
            logger.info(f"config.json is not writable: {e}")

    for key, value in default_config.items():
        config.setdefault(key, value)
    return config

config = load_config()

projectName = config.get('projectName', 'scalemodel')
logger.debug(f"projectName: {projectName}")

def set_log_level(level):
    """Apply a level name (e.g. "DEBUG") to the root logger."""
    level = str(level).upper()
    if not isinstance(logging.getLevelName(level), int):
        raise ConfigError(f"unknown log level: {level}")
    logging.getLogger().setLevel(level)

set_log_level(config.get("logLevel", "INFO"))

def resolve_seed(cli_seed=None, document_seed=None):
    """
    Seed precedence: command line, model document, SCALEMODEL_SEED, config.json.
    """
    if cli_seed is not None:
        return int(cli_seed)
    if document_seed is not None:
        return int(document_seed)

    env_seed = os.environ.get("SCALEMODEL_SEED")
    if env_seed:
        try:
            return int(env_seed)
        except ValueError:
            raise ConfigError(f"SCALEMODEL_SEED must be an integer, got {env_seed!r}")
    return int(config.get("seed", 0))

def resolve_trials(cli_trials=None, document_trials=None):
    if cli_trials is not None:
        return int(cli_trials)
    if document_trials is not None:
        return int(document_trials)
    return int(config.get("trials", 100))

def read_text(path):
    with open(path, "r", encoding="utf-8") as f:
        return f.read()

def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
