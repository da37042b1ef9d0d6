"""
Application Package

Exposes the application factory. `create_app` wires the repository, the
catalog and the verification service together from a configuration class,
the same way for the command line and for tests.
"""

from dataclasses import dataclass
from typing import Any, Optional

from spk_app.config import Config
from spk_app.repository.poly_repo import PolynomialRepository
from spk_app.service.catalog import CatalogService
from spk_app.service.checks import VerifyService


@dataclass
class SpkApp:
    """Wired-up services sharing one configuration."""
    config: Config
    repository: Optional[PolynomialRepository]
    catalog: CatalogService
    verifier: VerifyService


def create_app(config_class=Config, **overrides: Any) -> SpkApp:
    """
    Application factory pattern.

    Args:
        config_class: Configuration class to instantiate.
        **overrides: Config attributes to replace, given in lower case
            (cache_dir, jobs, resource_guard, log_level). None values are ignored.

    Returns:
        SpkApp: The wired application.
    """
    config = config_class()
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key.upper(), value)

    repository = PolynomialRepository(config.CACHE_DIR) if config.CACHE_DIR else None
    catalog = CatalogService(repository=repository, guard=config.RESOURCE_GUARD)
    verifier = VerifyService(catalog, cache_dir=config.CACHE_DIR)
    return SpkApp(config=config, repository=repository, catalog=catalog, verifier=verifier)
