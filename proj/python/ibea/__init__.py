"""Chaotic image block cipher workbench.

The heavy lifting lives in the compiled extension; this package just
re-exports it. See the project README for the CLI and file formats.
"""

from ._ibea import *  # noqa: F401,F403

__version__ = "0.1.0"
