import pytest

from crosshammer.fixtures import lists_a, lists_a_path, random_library
from crosshammer.kernel import canonical_key
from crosshammer.library import (
    LibraryParseError,
    LibraryValidationError,
    accessible,
    common_class_count,
    dep,
    load_library,
    parse_library,
    save_library,
)

SMALL = """\
# two theorems
C t/A type th 0
C t/c term th t/A
T t/refl th 0 (! (\\x:t/A. (= x x)))
T t/crefl th 1 (= t/c t/c)
D t/crefl t/refl
"""


def test_empty_file(tmp_path):
    p = tmp_path / "empty.lib"
    p.write_text("# nothing\n")
    lib = load_library(p)
    assert lib.thms == () and lib.consts == ()


def test_small_library():
    lib = parse_library(SMALL)
    assert lib.tag == "t"
    assert [t.id for t in lib.thms] == ["t/refl", "t/crefl"]
    assert dep(lib, "t/crefl") == {"t/refl"}
    assert dep(lib, "t/refl") == frozenset()


def test_spec_ordering_example():
    lines = ["C t/A type th 0", "C t/c term th t/A"]
    lines += [f"T t/X{i} th {i} (= t/c t/c)" for i in range(10)]
    lines = [l.replace("t/X5", "t/B").replace("t/X9", "t/A9") for l in lines]
    lines.append("D t/B t/A9")
    with pytest.raises(LibraryValidationError) as e:
        parse_library("\n".join(lines))
    assert e.value.item == "t/B"


def test_parse_error_has_line_number():
    with pytest.raises(LibraryParseError) as e:
        parse_library(SMALL + "T t/bad th 2 ((= t/c\n")
    assert e.value.line == 7


def test_duplicate_id_rejected():
    with pytest.raises(LibraryValidationError) as e:
        parse_library(SMALL + "T t/refl th 2 (= t/c t/c)\n")
    assert e.value.item == "t/refl"


def test_non_boolean_statement_rejected():
    with pytest.raises(LibraryParseError):
        parse_library(SMALL + "T t/odd th 2 t/c\n")


def test_external_dependency_dropped():
    lib = parse_library(SMALL + "D t/refl other/X\n")
    assert dep(lib, "t/refl") == frozenset()


def test_lists_a_counts(lib_a):
    assert len(lib_a.consts) == 30
    assert len(lib_a.thms) == 120
    assert dep(lib_a, "lists-A/APPEND_ASSOC") == {
        "lists-A/APPEND_NIL", "lists-A/APPEND_CONS", "lists-A/list_INDUCT"}


def test_bundled_file_matches_fixture(lib_a):
    loaded = load_library(lists_a_path())
    assert [(t.id, t.statement, t.deps) for t in loaded.thms] == [(t.id, t.statement, t.deps) for t in lib_a.thms]


def test_accessible(lib_a):
    first, last = lib_a.thms[0], lib_a.thms[-1]
    assert accessible(lib_a, first.id) == []
    assert accessible(lib_a, last.id) == [t.id for t in lib_a.thms[:-1]]
    for t in lib_a.thms:
        acc = accessible(lib_a, t.id)
        assert len(acc) == t.seq
        assert dep(lib_a, t.id) <= set(acc)


def test_unknown_id(lib_a):
    with pytest.raises(KeyError):
        accessible(lib_a, "lists-A/NOPE")
    with pytest.raises(KeyError):
        dep(lib_a, "lists-A/NOPE")


@pytest.mark.parametrize("make", [lists_a, lambda: random_library(3, 40, 150)])
def test_save_load_round_trip(tmp_path, make):
    lib = make()
    save_library(lib, tmp_path / "x.lib")
    back = load_library(tmp_path / "x.lib")
    assert back == lib


def test_common_class_count(lib_a):
    for th in lib_a.theories:
        keys = {canonical_key(t.statement) for t in lib_a.theory_thms(th)}
        assert common_class_count(lib_a, lib_a, th, th) == len(keys)
    other = parse_library(SMALL)
    assert common_class_count(lib_a, other, "list", "th") == 0
    with pytest.raises(KeyError):
        common_class_count(lib_a, other, "list", "nope")
