import logging
import re

from rsrp.config import get_cfg_defaults
from rsrp.utils import config_hash, provenance_line, setup_logger
from rsrp.version import version


class TestProvenance:

    def test_hash_follows_config(self):
        cfg = get_cfg_defaults()
        assert config_hash(cfg) == config_hash(get_cfg_defaults())
        cfg.SELECTION.RADIUS_M = 100.0
        assert config_hash(cfg) != config_hash(get_cfg_defaults())

    def test_line(self):
        line = provenance_line(get_cfg_defaults())
        assert re.match(r"^# rsrp-oracle \S+ config-hash=[0-9a-f]{64}$", line)
        assert version in line
        assert provenance_line().endswith("config-hash=none")


class TestLogger:

    def test_file_handler(self, tmp_path):
        logger = setup_logger("rsrp.test", str(tmp_path / "logs"), "unit")
        logger.info("hello")
        for h in logger.handlers:
            h.flush()
        assert "hello" in (tmp_path / "logs" / "log_unit.txt").read_text()
        for h in list(logger.handlers):
            logger.removeHandler(h)
            h.close()

    def test_repeated_setup_does_not_stack(self):
        setup_logger("rsrp.test2", "", "unit")
        logger = setup_logger("rsrp.test2", "", "unit")
        assert len(logger.handlers) == 1
        assert isinstance(logger.handlers[0], logging.StreamHandler)
