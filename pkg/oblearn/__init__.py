# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.

from .version import __version__
