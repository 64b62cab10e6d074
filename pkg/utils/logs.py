import logging
import sys


def configure_logging(debug=False):
    """Send log records to stderr; stdout carries the JSON/CSV output."""
    level = logging.DEBUG if debug else logging.WARNING
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(level)
