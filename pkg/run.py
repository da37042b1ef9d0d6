"""
Application Entry Point

This module serves as the entry point when the repository is used without
installing it. It builds the application from the environment, warms the
polynomial cache for the families most commands read, and hands control to
the `spk` command group.
"""

from spk_app import create_app
from spk_app.cli import main

WARM_FAMILIES = ("b", "xi", "zeta", "f")
WARM_N_MAX = 12


def warm_cache() -> None:
    """
    Fills the polynomial cache for the families used by the zero report.

    Does nothing when no cache directory is configured.
    """
    # Manual dependency injection for the startup script
    app = create_app()
    if app.repository is None:
        return
    for family in WARM_FAMILIES:
        for n in range(1, WARM_N_MAX + 1):
            app.catalog.family_poly(family, n)


if __name__ == '__main__':
    # Ensure cached polynomials are populated before dispatching
    warm_cache()

    main()
