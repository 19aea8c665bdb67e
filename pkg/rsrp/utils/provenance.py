# encoding: utf-8
"""
Provenance header written as the first line of every output file.
"""

import hashlib

from ..version import version


def config_hash(cfg) -> str:
    if cfg is None:
        return "none"
    return hashlib.sha256(cfg.dump().encode("utf-8")).hexdigest()


def provenance_line(cfg=None) -> str:
    return "# rsrp-oracle {} config-hash={}".format(version, config_hash(cfg))
