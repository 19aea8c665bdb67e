# encoding: utf-8

from .defaults import _C as cfg
from .defaults import get_cfg_defaults
