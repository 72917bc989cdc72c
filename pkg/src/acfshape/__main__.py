"""Module entry point so `python -m acfshape` works like the script."""

from .cli import main

if __name__ == "__main__":
    main()
