import pytest
from pydantic import ValidationError

from config import AnalysisConfig, apply_environment, config
from models import (AbelianStructure, GraphFile, Report, TypeTag, Verdict, VerdictStatus,
                    invariant_factors)


@pytest.mark.parametrize("orders, factors", [
    ([2, 3], [6]),
    ([4, 6], [2, 12]),
    ([1, -5], [5]),
    ([2, 2, 4], [2, 2, 4]),
    ([], []),
])
def test_invariant_factors(orders, factors):
    assert invariant_factors(orders) == factors


def test_torsion_must_form_a_divisibility_chain():
    with pytest.raises(ValidationError):
        AbelianStructure.free(1, [4, 2])
    with pytest.raises(ValidationError):
        AbelianStructure.free(1, [1])


def test_direct_sum():
    total = AbelianStructure.free(1, [2]).direct_sum(AbelianStructure.free(2, [3]))
    assert (total.kind, total.rank, total.torsion) == ("free_finite", 3, [6])
    assert AbelianStructure.trivial().direct_sum(AbelianStructure.countably_infinite()).is_countably_infinite
    assert AbelianStructure.unknown().direct_sum(AbelianStructure.free(2)).is_unknown
    assert AbelianStructure.trivial().direct_sum(AbelianStructure.trivial()).is_trivial


def test_structure_describe():
    assert AbelianStructure.free(0).describe() == "Γ' perfect"
    assert AbelianStructure.free(2, [3]).describe() == "Γ'_ab: free abelian rank 2 ⊕ ℤ/3"
    assert AbelianStructure.countably_infinite().describe() == "Γ'_ab: countably infinite rank"
    assert AbelianStructure.unknown().describe() == "Γ'_ab: unknown"


def test_decisive_verdicts_need_data():
    with pytest.raises(ValidationError):
        Verdict(status=VerdictStatus.FINITELY_PRESENTED, reason="no data")
    verdict = Verdict(status=VerdictStatus.INCONCLUSIVE, reason="no rule applies")
    assert not verdict.is_decisive
    assert verdict.describe() == "metabelian top: inconclusive"


def test_type_tags():
    assert str(TypeTag(family="I2", parameter=7)) == "I2(7)"
    assert str(TypeTag(family="E", parameter=8)) == "E8"
    with pytest.raises(ValidationError):
        TypeTag(family="E", parameter=5)
    with pytest.raises(ValidationError):
        TypeTag(family="D", parameter=3)


@pytest.mark.parametrize("raw, message", [
    ({"vertices": []}, "at least one vertex"),
    ({"vertices": ["a", "a"]}, "unique"),
    ({"vertices": ["a"], "edges": [{"u": "a", "v": "b", "label": 3}]}, "unknown vertex"),
    ({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "label": 3},
                                        {"u": "b", "v": "a", "label": 5}]}, "duplicates"),
    ({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "label": 2}]}, "labels >= 3"),
])
def test_graph_file_validation(raw, message):
    with pytest.raises(ValidationError, match=message):
        GraphFile.model_validate(raw)


def test_report_rendering():
    report = Report(command="alexander", headline="Δ = 1: metabelian top: finitely presented",
                    verdict=Verdict(status=VerdictStatus.FINITELY_PRESENTED, reason="unit leading coefficient",
                                    data={"span": 0}, trace=["Γ'_ab free abelian of rank 0"]))
    report.add_step("extremal coefficients", "leading 1, trailing 1")
    assert report.render_text().splitlines() == [
        "Δ = 1: metabelian top: finitely presented",
        "  [extremal coefficients] leading 1, trailing 1",
        "  rule: unit leading coefficient",
        "    Γ'_ab free abelian of rank 0",
    ]
    assert Report.model_validate_json(report.to_json()).to_json() == report.to_json()


def test_default_configuration_is_valid():
    assert config.validate_configuration()
    assert AnalysisConfig().get_search_config() == {"window": 6, "max_unknowns": 600}
    assert AnalysisConfig().get_reduction_config() == {"max_rounds": 200, "max_tower_steps": 64}
    assert AnalysisConfig().get_web_config()["port"] == 5000


@pytest.mark.parametrize("overrides", [{"window": -1}, {"batch_workers": 0}, {"log_level": "LOUD"}])
def test_invalid_configuration(overrides):
    assert not AnalysisConfig(**overrides).validate_configuration()


def test_environment_overrides():
    cfg = apply_environment(AnalysisConfig(), {"ARTIN_WINDOW": "9", "ARTIN_FREE_PRODUCT": "true"})
    assert cfg.window == 9
    assert cfg.free_product_convention is True
    quick = apply_environment(AnalysisConfig(), {"ARTIN_WINDOW": "9", "ARTIN_QUICK_MODE": "true"})
    assert (quick.window, quick.max_search_unknowns) == (4, 300)


def test_malformed_environment_override_is_skipped(caplog):
    cfg = apply_environment(AnalysisConfig(), {"ARTIN_WINDOW": "wide", "ARTIN_DEBUG": "true"})
    assert cfg.window == 6
    assert cfg.log_level == "DEBUG"
    assert "ignoring environment override window='wide'" in caplog.text
