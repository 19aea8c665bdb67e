from .logger import setup_logger
from .provenance import config_hash, provenance_line
