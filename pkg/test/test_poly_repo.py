"""
Unit Tests for PolynomialRepository

Tests cache hits, misses and the handling of damaged cache files.
"""
import os

from spk_app.model.codec import parse


def test_save_then_get(repository):
    """A saved polynomial comes back unchanged."""
    polynomial = parse("1 + 3*y + 3*x*y + x*y^2")
    repository.save("b", 2, polynomial)

    assert repository.path_for("b", 2).read_text(encoding="utf-8") == "1 + 3*y + 3*x*y + x*y^2\n"
    assert repository.get("b", 2) == polynomial


def test_missing_entry_is_a_miss(repository):
    assert repository.get("b", 9) is None


def test_non_canonical_text_is_a_miss(repository):
    """Hand-edited files that do not re-serialize identically are ignored."""
    repository.path_for("A", 3).write_text("x^2 + 4*x + 1\n", encoding="utf-8")
    assert repository.get("A", 3) is None


def test_garbage_is_a_miss(repository):
    repository.path_for("A", 3).write_text("1 + + x\n", encoding="utf-8")
    assert repository.get("A", 3) is None
    repository.path_for("A", 4).write_bytes(b"\xff\xfe\x00")
    assert repository.get("A", 4) is None


def test_failed_write_is_logged_not_raised(repository, mocker):
    mocker.patch("spk_app.repository.poly_repo.os.replace", side_effect=OSError("disk full"))
    polynomial = parse("1 + x")

    assert repository.save("A", 2, polynomial) == polynomial
    assert repository.get("A", 2) is None


def test_save_leaves_no_temporary_files(repository):
    repository.save("A", 2, parse("1 + x"))
    assert sorted(os.listdir(repository.cache_dir)) == ["A_2.poly"]


def test_list_delete_and_clear(repository):
    repository.save("b", 2, parse("1"))
    repository.save("b", 10, parse("1"))
    repository.save("Q8", 1, parse("1"))
    assert repository.list_entries() == [("Q8", 1), ("b", 2), ("b", 10)]

    repository.delete("b", 2)
    repository.delete("b", 2)
    assert repository.list_entries() == [("Q8", 1), ("b", 10)]

    repository.clear()
    assert repository.list_entries() == []


def test_failed_write_removes_temporary_file(repository, mocker):
    mocker.patch("spk_app.repository.poly_repo.os.replace", side_effect=OSError("disk full"))
    repository.save("A", 2, parse("1 + x"))
    assert os.listdir(repository.cache_dir) == []
