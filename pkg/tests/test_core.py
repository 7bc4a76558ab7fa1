import random
from fractions import Fraction

import pytest

from helpers import brute_components, brute_kappa, corpus, load
from steiner_intervals.core import (
    Instance,
    InstanceError,
    Interval,
    components_after_removal,
    contains,
    format_instance,
    format_rational,
    intersects,
    kappa,
    parse_instance,
    parse_rational,
)


def iv(ident, l, r):
    return Interval(ident, parse_rational(str(l)), parse_rational(str(r)))


class TestRational:
    @pytest.mark.parametrize("text", ["0", "20.5", "26.2", "-3", "0.125", "7.", "1000000.000001"])
    def test_round_trip(self, text):
        value = parse_rational(text)
        assert parse_rational(format_rational(value)) == value

    def test_exact(self):
        assert parse_rational("26.2") == Fraction(131, 5)
        assert parse_rational(".5") == Fraction(1, 2)

    def test_non_terminating_prints_as_fraction(self):
        assert format_rational(Fraction(1, 3)) == "1/3"
        assert parse_rational("1/3") == Fraction(1, 3)

    @pytest.mark.parametrize("text", ["", "abc", "1e5", "1.2.3", "nan", "1/0x"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            parse_rational(text)


class TestGeometry:
    def test_intersects_examples(self):
        assert intersects(iv("i2", 3, 5), iv("i3", 2, 7))
        assert not intersects(iv("i4", 8.5, 10.5), iv("i9", 11.5, 23))
        assert intersects(iv("a", 0, 1), iv("b", 1, 2))

    def test_contains_examples(self):
        i6 = iv("i6", 0, 19)
        assert contains(i6, iv("i5", 14, 16))
        assert not contains(i6, iv("i10", 18, 30))
        a = iv("a", 0, 1)
        assert not contains(a, a)

    def test_rejects_reversed_interval(self):
        with pytest.raises(InstanceError):
            iv("bad", 2, 1)

    def test_symmetry_and_transitivity(self):
        rng = random.Random(3)
        pool = [iv(f"x{k}", a, a + rng.randint(0, 5)) for k, a in enumerate(rng.randrange(15) for _ in range(25))]
        for a in pool:
            assert intersects(a, a)
            for b in pool:
                assert intersects(a, b) == intersects(b, a)
                for c in pool:
                    if contains(a, b) and contains(b, c) and a.id != c.id:
                        assert contains(a, c)


class TestInstance:
    def test_build_sorts_stably(self):
        inst = Instance.build([iv("b", 0, 5), iv("a", 1, 3), iv("c", 2, 3)], ["a"])
        assert inst.ids == ["a", "c", "b"]

    def test_invariants_enforced(self):
        with pytest.raises(InstanceError):
            Instance((iv("a", 0, 5), iv("b", 0, 1)), frozenset({"a"}))
        with pytest.raises(InstanceError):
            Instance((iv("a", 0, 1), iv("a", 0, 2)), frozenset({"a"}))
        with pytest.raises(InstanceError):
            Instance((iv("a", 0, 1),), frozenset({"z"}))
        with pytest.raises(InstanceError):
            Instance((iv("a", 0, 1),), frozenset())


class TestKappa:
    def test_figures(self):
        assert kappa(load("FIG1")) == 5
        assert kappa(load("FIG2")) == 2

    def test_disjoint(self):
        inst = Instance.build([iv(f"d{k}", 3 * k, 3 * k + 1) for k in range(6)], ["d0"])
        assert kappa(inst) == 0

    def test_matches_brute_force(self):
        for inst in corpus(21, 400):
            assert kappa(inst) == brute_kappa(inst)
            assert kappa(inst) <= max(len(inst) - 1, 0)


class TestComponents:
    def test_fig2_modified_three_s_islands(self):
        inst = load("FIG2_modified")
        comps = components_after_removal(inst, {"i5", "i6"})
        s_comps = [c for c in comps if c & inst.terminals]
        assert s_comps == [frozenset({"i1", "i2", "i3"}), frozenset({"i4"}), frozenset({"i7", "i8", "i9", "i10"})]

    def test_edge_cases(self):
        inst = load("FIG1")
        assert components_after_removal(inst, set(inst.ids)) == []
        assert components_after_removal(inst, set()) == [frozenset(inst.ids)]

    def test_unknown_id(self):
        with pytest.raises(InstanceError):
            components_after_removal(load("FIG1"), {"nope"})

    def test_partition_matches_union_find(self):
        rng = random.Random(8)
        for inst in corpus(22, 300):
            removed = {i for i in inst.ids if rng.random() < 0.3}
            comps = components_after_removal(inst, removed)
            assert sorted(map(sorted, comps)) == sorted(map(sorted, brute_components(inst, removed)))
            firsts = [min(inst.index[i] for i in c) for c in comps]
            assert firsts == sorted(firsts)


class TestTextFormat:
    def test_round_trip(self):
        for name in ("FIG1", "FIG2", "FIG2_modified"):
            inst = load(name)
            assert parse_instance(format_instance(inst)) == inst

    def test_comments_and_blank_lines(self):
        inst = parse_instance("# demo\nintervals 2\n\na 0 1\n# mid\nb 1 2\nterminals a b\n")
        assert inst.ids == ["a", "b"]

    @pytest.mark.parametrize(
        "text, line, fragment",
        [
            ("intervals 2\na 0 5\nb 0 1\nterminals a\n", 3, "order"),
            ("intervals 2\na 0 1\na 0 2\nterminals a\n", 3, "duplicate"),
            ("intervals 1\na 0 1\nterminals z\n", 3, "unknown terminal"),
            ("intervals 1\na 2 1\nterminals a\n", 2, "l > r"),
            ("intervals 1\na 0 1\nterminals\n", 3, "empty"),
            ("intervals 2\na 0 1\n", 3, "expected 2"),
            ("intervals x\n", 1, "intervals"),
            ("intervals 1\na 0 1\nterminals a\nextra\n", 4, "after terminals"),
            ("intervals 1\na zero 1\nterminals a\n", 2, "decimal"),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line, fragment):
        with pytest.raises(InstanceError) as info:
            parse_instance(text)
        assert info.value.line == line
        assert fragment in str(info.value)
