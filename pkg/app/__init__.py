import logging
import os
from datetime import datetime
from logging.handlers import RotatingFileHandler

import pytz
from flask import Flask

from .blueprints.api_routes import api_bp
from .blueprints.sim_commands import sim_bp
from .config import get_log_backup_count, get_log_file, get_log_level, get_log_max_size_mb, get_timezone

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def get_version():
    """Read version from VERSION file.

    Returns:
        str: Application version string, or '0.1.0' fallback if file not found
    """
    try:
        version_file = os.path.join(os.path.dirname(os.path.dirname(__file__)), "VERSION")
        with open(version_file, "r") as f:
            return f.read().strip()
    except (FileNotFoundError, IOError):
        return "0.1.0"  # Fallback version


class TimezoneFormatter(logging.Formatter):
    """Log timestamps in the configured timezone instead of the host's."""

    def __init__(self, fmt: str, timezone: str):
        super().__init__(fmt)
        try:
            self.tz = pytz.timezone(timezone)
        except pytz.UnknownTimeZoneError:
            self.tz = pytz.UTC

    def formatTime(self, record, datefmt=None):
        moment = datetime.fromtimestamp(record.created, self.tz)
        return moment.strftime(datefmt) if datefmt else moment.isoformat(timespec="seconds")


def configure_logging(level: str = None, log_file: str = None) -> None:
    """Attach a console handler and, when a log file is configured, a rotating file handler.

    Calling it again replaces the handlers installed by a previous call.
    """
    root = logging.getLogger()
    for handler in [h for h in root.handlers if getattr(h, "_netlab", False)]:
        root.removeHandler(handler)

    formatter = TimezoneFormatter(LOG_FORMAT, get_timezone())
    handlers = [logging.StreamHandler()]
    log_file = log_file if log_file is not None else get_log_file()
    if log_file:
        directory = os.path.dirname(log_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        handlers.append(
            RotatingFileHandler(
                log_file, maxBytes=get_log_max_size_mb() * 1024 * 1024, backupCount=get_log_backup_count()
            )
        )
    for handler in handlers:
        handler.setFormatter(formatter)
        handler._netlab = True
        root.addHandler(handler)
    root.setLevel(level or get_log_level())


def create_app():
    """Create and configure Flask application instance.

    This factory function creates the Flask app, configures logging, registers
    the REST API and the simulation commands.

    Returns:
        Flask: Configured Flask application instance
    """
    app = Flask(__name__)
    configure_logging()

    # Set version as app attribute
    app.version = get_version()

    # Register blueprints
    app.register_blueprint(api_bp)
    app.register_blueprint(sim_bp)

    return app
