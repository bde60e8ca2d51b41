"""Smoke tests for the python bindings: one happy path per exposed area."""
import patdrift
import pytest


def test_symbol_round_trip():
    s = patdrift.parse_symbol("Y02E60/10")
    assert patdrift.render_symbol(s) == "Y02E60/10"
    assert patdrift.is_green(s)
    assert patdrift.truncate(s, patdrift.CpcLevel.GROUP) == "Y02E60"
    assert not patdrift.is_green(patdrift.parse_symbol("H01L31/48"))


def test_fixture_and_formatting():
    rows = patdrift.table2_fixture()
    assert len(rows) == 6
    none = rows[0]
    assert none.count_new == 1814580
    assert patdrift.format_percent(none.count_reclass / (none.count_new - none.count_expansion)) == "9.2%"


def test_pipeline_round_trip(tmp_path):
    config = patdrift.GeneratorConfig()
    config.seed = 11
    config.n_families = 800
    result = patdrift.generate(config, str(tmp_path))

    store_old, report_old = patdrift.ingest_snapshot(result.old_paths, "old")
    store_new, report_new = patdrift.ingest_snapshot(result.new_paths, "new")
    assert report_new.malformed_rows == 0

    fams_old = patdrift.build_families(store_old)
    fams_new = patdrift.build_families(store_new)
    patdrift.populate_citations(store_new, fams_new)

    window = patdrift.YearWindow(1980, 2016)
    partition = patdrift.decompose(fams_old, fams_new, window)
    truth = {e.group: 0 for e in result.truth.entries}
    for e in result.truth.entries:
        truth[e.group] += 1
    assert len(partition.group_c) == truth.get("C", 0)
    assert len(partition.group_d) == truth.get("D", 0)

    total = partition.new_green_total()
    share = patdrift.reclassification_share(partition, total)
    assert 0.0 <= share <= 1.0

    series = patdrift.green_trend(fams_new, window)
    assert sum(series.points.values()) <= len(fams_new)

    fit = patdrift.loglog_fit([(1e3, 10.0), (1e4, 100.0), (1e5, 1000.0)])
    assert fit.slope == pytest.approx(1.0)


def test_config_validation():
    config = patdrift.GeneratorConfig()
    config.reclass_rate = 2.0
    with pytest.raises(Exception):
        config.validate()
