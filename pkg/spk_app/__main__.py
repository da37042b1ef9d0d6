"""Allows `python -m spk_app`."""

from spk_app.cli import main

if __name__ == "__main__":
    main()
