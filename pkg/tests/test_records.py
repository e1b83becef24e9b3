import numpy as np
import pytest

from uqscore.errors import (
    DimensionMismatch,
    LabelOutOfRange,
    Malformed,
    MissingLabels,
    SimplexViolation,
)
from uqscore.measures import SecondOrderSample
from uqscore.records import (
    PredictionRecord,
    parse_predictions,
    require_labels,
    uniform_class_count,
    write_predictions,
)


def write_lines(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


class TestParse:
    def test_minimal_record(self, tmp_path):
        path = tmp_path / "p.jsonl"
        write_lines(path, ['{"id": "a", "samples": [[0.5, 0.5]]}'])
        records = parse_predictions(path)
        assert len(records) == 1
        rec = records[0]
        assert rec.id == "a" and rec.label is None
        assert rec.sample.m == 1 and rec.sample.k == 2

    def test_order_preserved_and_varying_shapes(self, tmp_path):
        path = tmp_path / "p.jsonl"
        write_lines(
            path,
            [
                '{"id": "x", "samples": [[0.5, 0.5], [0.1, 0.9]], "label": 2}',
                '{"id": "y", "samples": [[0.2, 0.3, 0.5]]}',
            ],
        )
        records = parse_predictions(path)
        assert [r.id for r in records] == ["x", "y"]
        assert records[0].sample.m == 2
        assert records[1].sample.k == 3

    def test_simplex_violation_positions(self, tmp_path):
        path = tmp_path / "p.jsonl"
        write_lines(
            path,
            [
                '{"id": "ok", "samples": [[0.5, 0.5]]}',
                '{"id": "bad", "samples": [[0.5, 0.5], [0.5, 0.4]]}',
            ],
        )
        with pytest.raises(SimplexViolation) as err:
            parse_predictions(path)
        assert err.value.line == 2 and err.value.row == 2

    def test_renormalize_accepts_unscaled_rows(self, tmp_path):
        path = tmp_path / "p.jsonl"
        write_lines(path, ['{"id": "a", "samples": [[2.0, 2.0]]}'])
        with pytest.raises(SimplexViolation):
            parse_predictions(path)
        records = parse_predictions(path, renormalize=True)
        assert records[0].sample.matrix.tolist() == [[0.5, 0.5]]

    @pytest.mark.parametrize(
        "line",
        [
            "not json",
            '{"samples": [[0.5, 0.5]]}',
            '{"id": "a", "samples": []}',
            '{"id": "a", "samples": [[0.5, 0.5], [0.2, 0.3, 0.5]]}',
            '{"id": "a", "samples": [[0.5, "x"]]}',
            '{"id": "a", "samples": [[0.5, 0.5]], "label": 3}',
            '{"id": "a", "samples": [[0.5, 0.5]], "label": 1.5}',
            '{"id": "a", "samples": [[0.5, 0.5]], "extra": 1}',
        ],
    )
    def test_malformed_lines(self, tmp_path, line):
        path = tmp_path / "p.jsonl"
        write_lines(path, [line])
        with pytest.raises(Malformed) as err:
            parse_predictions(path)
        assert err.value.line == 1

    def test_empty_file(self, tmp_path):
        path = tmp_path / "p.jsonl"
        path.write_text("", encoding="utf-8")
        assert parse_predictions(path) == []

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "p.jsonl"
        write_lines(path, ["", '{"id": "a", "samples": [[0.5, 0.5]]}', ""])
        assert len(parse_predictions(path)) == 1


class TestRoundTrip:
    def test_bit_for_bit(self, tmp_path, rng):
        records = []
        for i in range(25):
            k = int(rng.integers(2, 6))
            m = int(rng.integers(1, 5))
            matrix = rng.dirichlet(np.ones(k), m)
            label = int(rng.integers(1, k + 1)) if rng.random() < 0.5 else None
            records.append(PredictionRecord(f"r{i}", SecondOrderSample(matrix), label))
        path = tmp_path / "round.jsonl"
        write_predictions(records, path)
        back = parse_predictions(path)
        assert len(back) == len(records)
        for a, b in zip(records, back):
            assert a.id == b.id and a.label == b.label
            assert np.array_equal(a.sample.matrix, b.sample.matrix)


class TestHelpers:
    def test_uniform_class_count(self, tmp_path):
        a = PredictionRecord("a", SecondOrderSample([[0.5, 0.5]]))
        b = PredictionRecord("b", SecondOrderSample([[0.2, 0.3, 0.5]]))
        assert uniform_class_count([a]) == 2
        with pytest.raises(DimensionMismatch):
            uniform_class_count([a, b])

    def test_require_labels(self):
        a = PredictionRecord("a", SecondOrderSample([[0.5, 0.5]]), 1)
        b = PredictionRecord("b", SecondOrderSample([[0.5, 0.5]]))
        assert require_labels([a]) == [1]
        with pytest.raises(MissingLabels):
            require_labels([a, b])

    def test_label_validation_on_construction(self):
        with pytest.raises(LabelOutOfRange):
            PredictionRecord("a", SecondOrderSample([[0.5, 0.5]]), 3)
