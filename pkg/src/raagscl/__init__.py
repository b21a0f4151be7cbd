"""raagscl - counting quasimorphisms and scl certificates for right-angled Artin groups."""

from raagscl.main import main

__all__ = ["main"]
