"""
Unit Tests for the Catalog Service

Small family members are pinned to hand-checked values; larger ones are
compared across the routes the catalog offers.
"""
import pytest

from spk_app.errors import IndexRangeError, InvariantError, RouteDisagreementError, UnknownNameError
from spk_app.model.codec import parse, serialize
from spk_app.model.polynomial import Polynomial, substitute
from spk_app.model.records import GammaTable
from spk_app.service import catalog as catalog_module
from spk_app.service.catalog import (
    CatalogService,
    eulerian_a,
    eulerian_b,
    f_poly,
    gamma_table_by_grammar,
    gamma_table_by_recursion,
    stirling2,
    xi_zeta,
    xi_zeta_coefficients,
)


@pytest.mark.parametrize("family, n, text", [
    ("A", 3, "1 + 4*x + x^2"),
    ("B", 2, "1 + 6*x + x^2"),
    ("Bq", 1, "1 + q*x"),
    ("b", 1, "1 + y"),
    ("b", 2, "1 + 3*y + 3*x*y + x*y^2"),
    ("D", 2, "1 + 2*x + x^2"),
    ("d", 3, "x + x^2"),
    ("T", 2, "x + x^2"),
    ("xi", 3, "1 + 2*x"),
    ("zeta", 3, "6"),
    ("f", 2, "2 + 2*x"),
    ("f", 3, "2 + 6*x + 4*x^2"),
    ("M", 2, "1 + 2*x"),
    ("Mtilde", 2, "2*x + x^2"),
    ("S2", 3, "x + 3*x^2 + x^3"),
    ("C3", 1, "x*y*z"),
    ("C3", 2, "x^2*y^2*z + x^2*y*z^2 + x*y^2*z^2"),
])
def test_small_family_members(catalog, family, n, text):
    assert serialize(catalog.family_poly(family, n)) == text


@pytest.mark.parametrize("family, n", [
    ("A", 5), ("B", 4), ("Bq", 4), ("b", 4), ("D", 4), ("d", 5), ("T", 5),
    ("C3", 4), ("M", 4), ("Mtilde", 4), ("N", 4), ("Q6", 4), ("Q8", 4), ("NP", 4),
])
def test_fast_route_matches_enumeration(catalog, family, n):
    assert catalog.family_poly(family, n) == catalog.family_poly(family, n, route="enumeration")


@pytest.mark.parametrize("family, n", [
    ("b", 5), ("Bq", 4), ("C3", 5), ("Q6", 4), ("Q8", 4), ("F17", 3), ("xi", 7), ("zeta", 7),
])
def test_grammar_route_matches_fast(catalog, family, n):
    assert catalog.family_poly(family, n, route="grammar") == catalog.family_poly(family, n)


def test_routes_listing(catalog):
    assert catalog.routes("b") == ("fast", "enumeration", "grammar")
    assert catalog.routes("f") == ("fast",)
    with pytest.raises(UnknownNameError):
        catalog.family_poly("f", 3, route="enumeration")
    with pytest.raises(UnknownNameError):
        catalog.routes("nope")


def test_index_below_range(catalog):
    with pytest.raises(IndexRangeError):
        catalog.family_poly("D", 1)
    with pytest.raises(IndexRangeError):
        catalog.family_poly("b", 0)


def test_type_b_specializations():
    """B_n(x) = B_n(x, 1) and A_n(x) = B_n(x, 0)."""
    service = CatalogService()
    bq = service.family_poly("Bq", 5)
    assert substitute(bq, {"q": 1}) == eulerian_b(5)
    assert substitute(bq, {"q": 0}) == eulerian_a(5)


def test_b_routes_agree():
    service = CatalogService()
    for n in range(2, 7):
        assert service.b_by_changed_grammar(n) == service.family_poly("b", n)
        assert service.bn_expansion_rhs(n) == service.family_poly("b", n)


def test_signed_triple_grammars_agree():
    service = CatalogService()
    for n in range(1, 6):
        assert service.signed_triple_by_grammar(n) == service.signed_triple_by_word_grammar(n)


def test_dumont_route(catalog):
    for n in range(1, 6):
        assert catalog.c3_by_dumont(n) == catalog.family_poly("C3", n)


def test_gamma_table_n4(catalog):
    table = catalog.gamma_table(4)
    assert table.rows() == [((0, 0, 3), 6), ((1, 1, 2), 8), ((0, 3, 1), 1)]
    assert table.mass() == 105


@pytest.mark.parametrize("n", range(1, 10))
def test_gamma_routes_agree_and_mass(n):
    by_recursion = gamma_table_by_recursion(n)
    assert by_recursion.entries == gamma_table_by_grammar(n).entries
    assert all(value > 0 for value in by_recursion.entries.values())
    expected = 1
    for k in range(1, n + 1):
        expected *= 2 * k - 1
    assert by_recursion.mass() == expected


def test_gamma_route_disagreement_is_reported(catalog, mocker):
    mocker.patch.object(catalog_module, "gamma_table_by_grammar", return_value=GammaTable(n=3, entries={}))
    with pytest.raises(RouteDisagreementError) as exc_info:
        catalog.gamma_table(3)
    assert exc_info.value.counterexample["n"] == 3
    assert isinstance(exc_info.value, InvariantError)


def test_gamma_substitute_explicit_mapping(catalog):
    y = Polynomial.var("y")
    result = catalog.gamma_substitute(2, {"u": 0, "v": y, "w": 1, "t": 1})
    assert result == y
    with pytest.raises(UnknownNameError):
        catalog.gamma_substitute(2, {"u": 0})
    with pytest.raises(UnknownNameError):
        catalog.gamma_substitute(2, "nope")


def test_xi_zeta_recurrence_and_runs(catalog):
    for n in range(1, 10):
        xi, zeta = xi_zeta(n)
        f = f_poly(n)
        x = Polynomial.var("x")
        assert substitute(2 * xi, {"x": x ** 2}) + x * substitute(zeta, {"x": x ** 2}) == f
        assert catalog.xi_zeta_from_runs(n) == xi_zeta_coefficients(n)


def test_stirling2():
    assert stirling2(3, 2) == 3
    assert stirling2(5, 5) == 1
    assert stirling2(4, 0) == 0
    with pytest.raises(IndexRangeError):
        stirling2(2, 3)


def test_carlitz_identity(catalog):
    product, column = catalog.carlitz_series(3, 8)
    assert product == column
    assert column[:3] == [0, 1, 15]


def test_fast_route_uses_repository(tmp_path, mocker):
    from spk_app.repository.poly_repo import PolynomialRepository

    repository = PolynomialRepository(tmp_path)
    service = CatalogService(repository=repository)
    save_spy = mocker.spy(repository, "save")
    first = service.family_poly("b", 3)
    second = service.family_poly("b", 3)
    assert first == second
    assert save_spy.call_count == 1
    assert repository.get("b", 3) == first


def test_cached_entry_is_preferred(tmp_path):
    from spk_app.repository.poly_repo import PolynomialRepository

    repository = PolynomialRepository(tmp_path)
    repository.save("A", 3, parse("7"))
    assert CatalogService(repository=repository).family_poly("A", 3) == 7
