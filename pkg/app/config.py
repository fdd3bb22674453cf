import configparser
import os
from typing import Any, Optional

# Default configuration values
DEFAULT_CONFIG_FILE = "config/settings.ini"
DEFAULT_MAX_ITERATIONS = 1000
DEFAULT_IDLE_TERMINATE = 30
DEFAULT_REPETITIONS = 100
DEFAULT_MASTER_SEED = 20240101
DEFAULT_ALLOW_INDIFFERENT_ADDS = False
DEFAULT_DETECT_CYCLES = True
DEFAULT_SWEEP_STEP = "1/20"
DEFAULT_SWEEP_DENSITIES = "0,7/20,7/10"
DEFAULT_SWEEP_N = "10"
DEFAULT_TAU_FRACTION = "1/10"
DEFAULT_ORACLE_MAX_NODES = 7
DEFAULT_ORACLE_CHUNK_SIZE = 65536
DEFAULT_OUTPUT_DIR = "output"
DEFAULT_WORKERS = 0
DEFAULT_PROGRESS = False
DEFAULT_LOG_LEVEL = "INFO"
DEFAULT_LOG_FILE = ""
DEFAULT_LOG_MAX_SIZE_MB = 5
DEFAULT_LOG_BACKUP_COUNT = 5
DEFAULT_TIMEZONE = "Etc/GMT"

TRUE_VALUES = ("1", "true", "yes", "on")
FALSE_VALUES = ("0", "false", "no", "off")


class Config:
    """Configuration management with INI file and environment variable
    support"""

    def __init__(self, config_file: Optional[str] = None):
        self.config = configparser.ConfigParser()
        self.config_file = config_file or os.environ.get("NETLAB_CONFIG", DEFAULT_CONFIG_FILE)
        self._load_config()

    def _load_config(self):
        """Load configuration from INI file"""
        if os.path.exists(self.config_file):
            self.config.read(self.config_file)
        else:
            # Create default config if file doesn't exist
            self._create_default_config()

    def _create_default_config(self):
        """Create default configuration with comments"""
        config_dir = os.path.dirname(self.config_file)
        if config_dir:
            os.makedirs(config_dir, exist_ok=True)

        default_config_content = f"""[simulation]
# Maximum scheduling passes per run (can be overridden with MAX_ITERATIONS env
# var)
max_iterations = {DEFAULT_MAX_ITERATIONS}
# Consecutive idle passes that end a run as converged (can be overridden with
# IDLE_TERMINATE env var)
idle_terminate = {DEFAULT_IDLE_TERMINATE}
# Runs per grid cell (can be overridden with REPETITIONS env var)
repetitions = {DEFAULT_REPETITIONS}
# Master seed for per-run seed derivation (can be overridden with MASTER_SEED
# env var)
master_seed = {DEFAULT_MASTER_SEED}
# Execute zero-gain link additions (can be overridden with
# ALLOW_INDIFFERENT_ADDS env var)
allow_indifferent_adds = {str(DEFAULT_ALLOW_INDIFFERENT_ADDS).lower()}
# Report revisited graph states (can be overridden with DETECT_CYCLES env var)
detect_cycles = {str(DEFAULT_DETECT_CYCLES).lower()}

[sweep]
# Grid step for delta and cost, as a rational (can be overridden with
# SWEEP_STEP env var)
step = {DEFAULT_SWEEP_STEP}
# Initial densities, comma separated rationals (can be overridden with
# SWEEP_DENSITIES env var)
densities = {DEFAULT_SWEEP_DENSITIES}
# Node counts, comma separated (can be overridden with SWEEP_N env var)
n = {DEFAULT_SWEEP_N}

[classifier]
# Near-structure threshold as a fraction of (n-1)^2 (can be overridden with
# TAU_FRACTION env var)
tau_fraction = {DEFAULT_TAU_FRACTION}

[oracle]
# Largest node count accepted for exhaustive enumeration (can be overridden
# with ORACLE_MAX_NODES env var)
max_nodes = {DEFAULT_ORACLE_MAX_NODES}
# Graphs per enumeration chunk (can be overridden with ORACLE_CHUNK_SIZE env
# var)
chunk_size = {DEFAULT_ORACLE_CHUNK_SIZE}

[output]
# Directory for CSV files and run manifests (can be overridden with OUTPUT_DIR
# env var)
directory = {DEFAULT_OUTPUT_DIR}
# Worker processes, 0 uses every available core (can be overridden with
# WORKERS env var)
workers = {DEFAULT_WORKERS}
# Show progress bars on stderr (can be overridden with PROGRESS env var)
progress = {str(DEFAULT_PROGRESS).lower()}

[logging]
# Log level for console output: DEBUG, INFO, WARNING, ERROR (can be overridden
# with LOG_LEVEL env var)
level = {DEFAULT_LOG_LEVEL}
# Optional rotating log file, empty logs to the console only (can be
# overridden with LOG_FILE env var)
file = {DEFAULT_LOG_FILE}
# Maximum size for log files in MB (can be overridden with LOG_MAX_SIZE_MB env
# var)
max_size_mb = {DEFAULT_LOG_MAX_SIZE_MB}
# Number of rotated log files to keep (can be overridden with LOG_BACKUP_COUNT
# env var)
backup_count = {DEFAULT_LOG_BACKUP_COUNT}
# Timezone for logging and manifests (can be overridden with TZ env var,
# default is Etc/GMT)
timezone = {DEFAULT_TIMEZONE}
"""

        with open(self.config_file, "w") as f:
            f.write(default_config_content)

        # Also load it into the configparser for immediate use
        self.config.read(self.config_file)

    def get(self, section: str, key: str, default: Any = None, env_var: Optional[str] = None) -> Any:
        """Get configuration value with environment variable override"""
        # Check environment variable first
        if env_var and env_var in os.environ:
            return os.environ[env_var]

        # Fall back to INI file
        try:
            return self.config.get(section, key)
        except (configparser.NoSectionError, configparser.NoOptionError):
            return default

    def getint(self, section: str, key: str, default: int = 0, env_var: Optional[str] = None) -> int:
        """Get integer configuration value"""
        value = self.get(section, key, str(default), env_var)
        try:
            return int(value)
        except (ValueError, TypeError):
            return default

    def getbool(self, section: str, key: str, default: bool = False, env_var: Optional[str] = None) -> bool:
        """Get boolean configuration value"""
        value = str(self.get(section, key, str(default), env_var)).strip().lower()
        if value in TRUE_VALUES:
            return True
        if value in FALSE_VALUES:
            return False
        return default

    def get_enum(self, section: str, key: str, valid_options: list, default: str, env_var: Optional[str] = None) -> str:
        """Get enum configuration value with case-insensitive matching"""
        value = self.get(section, key, default, env_var)

        for option in valid_options:
            if str(value).upper() == option.upper():
                return option

        return default


# Global configuration instance
config = Config()


# Convenience functions for common settings
def get_max_iterations() -> int:
    """Get the maximum number of scheduling passes per run."""
    return config.getint("simulation", "max_iterations", DEFAULT_MAX_ITERATIONS, "MAX_ITERATIONS")


def get_idle_terminate() -> int:
    """Get the idle-pass streak that ends a run."""
    return config.getint("simulation", "idle_terminate", DEFAULT_IDLE_TERMINATE, "IDLE_TERMINATE")


def get_repetitions() -> int:
    """Get the number of runs per grid cell."""
    return config.getint("simulation", "repetitions", DEFAULT_REPETITIONS, "REPETITIONS")


def get_master_seed() -> int:
    return config.getint("simulation", "master_seed", DEFAULT_MASTER_SEED, "MASTER_SEED")


def get_allow_indifferent_adds() -> bool:
    return config.getbool(
        "simulation", "allow_indifferent_adds", DEFAULT_ALLOW_INDIFFERENT_ADDS, "ALLOW_INDIFFERENT_ADDS"
    )


def get_detect_cycles() -> bool:
    return config.getbool("simulation", "detect_cycles", DEFAULT_DETECT_CYCLES, "DETECT_CYCLES")


def get_sweep_step() -> str:
    """Get the grid step for delta and cost (rational string)."""
    return config.get("sweep", "step", DEFAULT_SWEEP_STEP, "SWEEP_STEP")


def get_sweep_densities() -> str:
    """Get the comma separated initial densities (rational strings)."""
    return config.get("sweep", "densities", DEFAULT_SWEEP_DENSITIES, "SWEEP_DENSITIES")


def get_sweep_n() -> str:
    return config.get("sweep", "n", DEFAULT_SWEEP_N, "SWEEP_N")


def get_tau_fraction() -> str:
    """Get the near-structure threshold fraction (rational string)."""
    return config.get("classifier", "tau_fraction", DEFAULT_TAU_FRACTION, "TAU_FRACTION")


def get_oracle_max_nodes() -> int:
    """Get the largest node count accepted by the exhaustive oracle."""
    return config.getint("oracle", "max_nodes", DEFAULT_ORACLE_MAX_NODES, "ORACLE_MAX_NODES")


def get_oracle_chunk_size() -> int:
    return config.getint("oracle", "chunk_size", DEFAULT_ORACLE_CHUNK_SIZE, "ORACLE_CHUNK_SIZE")


def get_output_dir() -> str:
    return config.get("output", "directory", DEFAULT_OUTPUT_DIR, "OUTPUT_DIR")


def get_workers() -> int:
    """Get the worker count; 0 means every available core."""
    return config.getint("output", "workers", DEFAULT_WORKERS, "WORKERS")


def get_progress() -> bool:
    return config.getbool("output", "progress", DEFAULT_PROGRESS, "PROGRESS")


def get_log_level() -> str:
    """Get logging level configuration."""
    valid_options = ["DEBUG", "INFO", "WARNING", "ERROR"]
    return config.get_enum("logging", "level", valid_options, DEFAULT_LOG_LEVEL, "LOG_LEVEL")


def get_log_file() -> str:
    return config.get("logging", "file", DEFAULT_LOG_FILE, "LOG_FILE")


def get_log_max_size_mb() -> int:
    return config.getint("logging", "max_size_mb", DEFAULT_LOG_MAX_SIZE_MB, "LOG_MAX_SIZE_MB")


def get_log_backup_count() -> int:
    return config.getint("logging", "backup_count", DEFAULT_LOG_BACKUP_COUNT, "LOG_BACKUP_COUNT")


def get_timezone() -> str:
    """Get timezone configuration"""
    return config.get("logging", "timezone", DEFAULT_TIMEZONE, "TZ")
