"""Module entry point so ``python -m qslab`` behaves like the ``qsl`` script."""

from .cli import entry

if __name__ == "__main__":
    entry()
