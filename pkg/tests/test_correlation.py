import math

import numpy as np
import pytest

from qcorr.correlation import (SetPartition, all_bipartitions, analyze, check_araki_lieb, check_partition_invariance,
                               check_pure_tripartite_identities, check_strong_subadditivity,
                               classical_quantum_bounds, decompose, index_of_correlation,
                               is_necessarily_nonclassical, lambda_parameter, mutual_information,
                               pairwise_expansion, sig12)
from qcorr.errors import BadPartition, NegativeEntropy, NotPure, OverlappingGroups, WrongArity
from qcorr.states import (bell, classical_correlated, ghz, maximally_mixed, product_state, random_mixed, random_pure,
                          schmidt_state)


def bell_pairs():
    return product_state([bell(), bell()])


def test_index_canonical_values():
    assert abs(index_of_correlation(schmidt_state([0.5, 0.5])) - 2.0) < 1e-12
    assert abs(index_of_correlation(classical_correlated(2)) - 1.0) < 1e-12
    prod = product_state([random_mixed((2,), seed=1), random_mixed((3,), seed=2)])
    assert abs(index_of_correlation(prod)) < 1e-12


def test_index_in_nats():
    assert abs(index_of_correlation(bell(), base="e") - 2 * math.log(2)) < 1e-12


def test_schmidt_index_is_twice_entanglement_entropy():
    p = np.array([0.9, 0.1])
    assert abs(index_of_correlation(schmidt_state(p)) + 2 * np.sum(p * np.log2(p))) < 1e-12


def test_two_ghz3_give_six_bits():
    assert abs(index_of_correlation(product_state([ghz(3), ghz(3)])) - 6.0) < 1e-9


def test_mutual_information_values():
    assert abs(mutual_information(bell(), [0], [1]) - 2.0) < 1e-12
    assert abs(mutual_information(ghz(3), [0], [1]) - 1.0) < 1e-12
    prod = product_state([np.array([1, 0]), np.array([0.6, 0.8])])
    assert abs(mutual_information(prod, [0], [1])) < 1e-12


def test_mutual_information_overlap():
    with pytest.raises(OverlappingGroups):
        mutual_information(ghz(3), [0, 1], [1])


def test_decompose_bell_pairs():
    st = bell_pairs()
    r = decompose(st, SetPartition(((0, 1), (2, 3))))
    np.testing.assert_allclose(r.internal, [2, 2], atol=1e-12)
    assert abs(r.external) < 1e-12
    r = decompose(st, SetPartition(((0, 2), (1, 3))))
    np.testing.assert_allclose(r.internal, [0, 0], atol=1e-12)
    assert abs(r.external - 4) < 1e-12
    assert all(v.passed for v in r.verdicts)


def test_decompose_matching_product_has_no_external():
    st = product_state([random_mixed((2, 2), seed=3), random_mixed((2,), seed=4)])
    assert abs(decompose(st, SetPartition.parse("01|2")).external) < 1e-12


def test_decompose_wrong_size():
    with pytest.raises(BadPartition):
        decompose(ghz(3), SetPartition.parse("01|23"))


def test_set_partition_validation_and_text():
    p = SetPartition(((3, 1), (0, 2)))
    assert str(p) == "02|13"
    assert SetPartition.parse("0,2|1,3") == p
    with pytest.raises(BadPartition):
        SetPartition(((0, 1), (1, 2)))
    with pytest.raises(BadPartition):
        SetPartition(((0,), (2,)))


def test_partition_invariance_examples():
    res = check_partition_invariance(bell_pairs(), SetPartition.parse("01|23"), SetPartition.parse("02|13"))
    assert res.passed and abs(res.sum_first - 4) < 1e-12
    st = random_pure((2, 2, 2, 2), seed=5)
    for p in all_bipartitions(4):
        assert check_partition_invariance(st, p, SetPartition.finest(4)).passed


def test_all_bipartitions_count():
    assert len(all_bipartitions(4)) == 7
    assert len(all_bipartitions(5)) == 15


def test_lambda_values():
    assert abs(lambda_parameter(random_pure((2, 2, 2), seed=6))) < 1e-8
    mixed = product_state([random_mixed((2,), seed=i) for i in range(3)])
    assert abs(lambda_parameter(mixed)) < 1e-12
    assert abs(lambda_parameter(classical_correlated(3)) - 1.0) < 1e-12
    with pytest.raises(WrongArity):
        lambda_parameter(bell())


def test_pairwise_expansion_examples():
    np.testing.assert_allclose(pairwise_expansion(ghz(4)), [2, 1, 1], atol=1e-12)
    np.testing.assert_allclose(pairwise_expansion(bell_pairs()), [2, 0, 2], atol=1e-12)
    prod = product_state([np.array([1, 0])] * 3)
    np.testing.assert_allclose(pairwise_expansion(prod), [0, 0], atol=1e-12)


def test_pairwise_expansion_reordered():
    st = bell_pairs()
    np.testing.assert_allclose(pairwise_expansion(st, order=[0, 2, 1, 3]), [2, 2, 0], atol=1e-12)
    with pytest.raises(BadPartition):
        pairwise_expansion(st, order=[0, 0, 1, 2])


def test_strong_subadditivity_ghz3():
    res = check_strong_subadditivity(ghz(3))
    assert res.passed
    v = res["total_exceeds_pair_sum[C]"]
    assert abs(v.slack - 1.0) < 1e-12  # 3 >= 1 + 1


def test_strong_subadditivity_random():
    for seed in range(20):
        assert check_strong_subadditivity(random_mixed((2, 2, 2), seed=seed)).min_slack >= -1e-8


def test_strong_subadditivity_arity():
    with pytest.raises(WrongArity):
        check_strong_subadditivity(bell())


def test_pure_tripartite_identities():
    res = check_pure_tripartite_identities(ghz(3))
    assert res.passed
    assert abs(res["pure_total_is_pair_sum"].slack) < 1e-12
    for seed in range(10):
        assert check_pure_tripartite_identities(random_pure((2, 2, 2), seed=seed)).passed
    with pytest.raises(NotPure):
        check_pure_tripartite_identities(classical_correlated(3))


def test_araki_lieb():
    res = check_araki_lieb(bell(), [0], [1])
    assert res.passed
    assert abs(res["araki_lieb_lower"].slack) < 1e-12  # S(AB) = 0 = |1 - 1|
    with pytest.raises(OverlappingGroups):
        check_araki_lieb(ghz(3), [0], [0, 1])


def test_bounds():
    b = classical_quantum_bounds([1.0] * 5)
    assert (b.classical_max, b.quantum_max, b.gap) == (4.0, 5.0, 1.0)
    b = classical_quantum_bounds([1.0, 0.5])
    assert b.bipartite_quantum == 1.0 and b.bipartite_classical == 0.5
    b = classical_quantum_bounds([0.0, 0.0, 0.0])
    assert (b.classical_max, b.quantum_max, b.gap) == (0.0, 0.0, 0.0)
    with pytest.raises(NegativeEntropy):
        classical_quantum_bounds([1.0, -0.1])


def test_nonclassical_flag():
    assert is_necessarily_nonclassical(bell())
    assert not is_necessarily_nonclassical(classical_correlated(2))
    assert not is_necessarily_nonclassical(schmidt_state([0.9, 0.1]))


def test_analyze_report_fields():
    rep = analyze(ghz(3))
    d = rep.to_dict()
    assert d["index"] == 3.0
    assert d["lambda"] == 0.0 or abs(d["lambda"]) < 1e-12
    assert d["pairwise"] == [2.0, 1.0]
    assert d["log_base"] == 2.0 and d["tolerance"] == 1e-8
    assert rep.passed


def test_analyze_product_passes():
    rep = analyze(maximally_mixed((2, 2)))
    assert rep.passed and abs(rep.index) < 1e-12


def test_sig12_has_no_negative_zero():
    assert math.copysign(1.0, sig12(-1e-300 * 1e-300)) == 1.0
    assert sig12(1 / 3) == 0.333333333333
