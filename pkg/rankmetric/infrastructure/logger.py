import logging
import logging.config

LOGGER = "rankLogger"
LOG_NAME = "simulation.log"
LOG_FORMAT = "%(asctime)s %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# console output of the CLI; run directories add a file handler through add_fhandler
LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {"default": {"format": LOG_FORMAT, "datefmt": DATE_FORMAT}},
    "handlers": {
        "console": {
            "formatter": "default",
            "level": "INFO",
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
        }
    },
    "loggers": {LOGGER: {"level": "DEBUG", "handlers": ["console"], "propagate": False}},
}


def add_fhandler(filename: str) -> logging.FileHandler:
    """Sends every rankLogger record, DEBUG included, to ``filename``."""
    fhandler = logging.FileHandler(filename)
    fhandler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
    fhandler.setLevel(logging.DEBUG)
    logging.getLogger(LOGGER).addHandler(fhandler)
    return fhandler


def setup_logger() -> None:
    logging.config.dictConfig(LOGGING_CONFIG)


def set_console_log_level(log_level: str) -> None:
    """Set the console log level based on the user's CLI input."""
    for handler in logging.getLogger(LOGGER).handlers:
        if isinstance(handler, logging.StreamHandler) and not isinstance(
            handler, logging.FileHandler
        ):
            handler.setLevel(log_level)
