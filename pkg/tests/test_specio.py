"""Input-schema parsing: accepted documents, first-failure diagnostics."""

import numpy as np
import pytest

from plrmat.errors import SpecFileError
from plrmat.specio import build_setup, dumps_canonical, input_digest, parse_spec


def sl2_doc(**overrides):
    doc = {
        "schema_version": "1",
        "scalars": "real",
        "algebra": {
            "dim": 3,
            "structure_constants": [[0, 1, 1, 2.0], [0, 2, 2, -2.0], [1, 2, 0, 1.0]],
            "basis_labels": ["h", "e", "f"],
        },
        "r_matrix": [[1, 2, 0.5]],
        "subalgebra_K": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "subalgebra_H": [[1, 0, 0]],
        "complement_M": [[0, 1, 0], [0, 0, 1]],
    }
    doc.update(overrides)
    return doc


def first_condition(doc):
    with pytest.raises(SpecFileError) as err:
        parse_spec(doc)
    return err.value.condition


class TestParse:
    def test_valid_document_round_trips(self):
        parsed = parse_spec(sl2_doc())
        assert parsed["G"].dim == 3
        assert parsed["R"].coeffs[1, 2] == 0.5
        assert parsed["R"].coeffs[2, 1] == -0.5
        setup = build_setup(parsed)
        assert setup.dim_M == 2

    def test_defaults_filled(self):
        parsed = parse_spec(sl2_doc())
        assert parsed["tolerances"]["cond_threshold"] == 1e8
        assert parsed["sampling"]["num_points"] == 10

    def test_empty_complement_allowed(self):
        doc = sl2_doc(subalgebra_H=[[1, 0, 0], [0, 1, 0], [0, 0, 1]], complement_M=[])
        setup = build_setup(parse_spec(doc))
        assert setup.dim_M == 0

    def test_version_checked(self):
        assert first_condition(sl2_doc(schema_version="2")) == "schema_version"

    def test_scalars_checked(self):
        assert first_condition(sl2_doc(scalars="complex")) == "scalars"

    def test_structure_constant_triplets_validated(self):
        base = sl2_doc()
        bad = dict(base, algebra=dict(base["algebra"], structure_constants=[[1, 0, 1, 2.0]]))
        assert first_condition(bad) == "algebra.structure_constants"
        bad = dict(base, algebra=dict(base["algebra"],
                                      structure_constants=[[0, 1, 5, 2.0]]))
        assert first_condition(bad) == "algebra.structure_constants"
        bad = dict(base, algebra=dict(base["algebra"],
                                      structure_constants=[[0, 1, 1, 2.0], [0, 1, 1, 3.0]]))
        assert first_condition(bad) == "algebra.structure_constants"

    def test_jacobi_violation_reported_as_algebra(self):
        base = sl2_doc()
        bad = dict(base, algebra=dict(base["algebra"],
                                      structure_constants=[[0, 1, 1, 2.0], [0, 2, 2, -2.0],
                                                           [1, 2, 0, 1.0], [1, 2, 1, 1.0]]))
        assert first_condition(bad) == "algebra"

    def test_r_matrix_orientation(self):
        assert first_condition(sl2_doc(r_matrix=[[2, 1, 0.5]])) == "r_matrix"
        assert first_condition(sl2_doc(r_matrix=[[1, 1, 0.5]])) == "r_matrix"

    def test_row_length_checked(self):
        assert first_condition(sl2_doc(subalgebra_H=[[1, 0]])) == "subalgebra_H"

    def test_missing_field(self):
        doc = sl2_doc()
        del doc["subalgebra_K"]
        assert first_condition(doc) == "subalgebra_K"

    def test_bad_sampling_types(self):
        assert first_condition(sl2_doc(sampling={"seed": "six"})) == "sampling"


class TestSerialization:
    def test_digest_is_stable(self):
        raw = b'{"x": 1}'
        assert input_digest(raw) == input_digest(raw)
        assert input_digest(raw).startswith("sha256:")

    def test_canonical_numbers(self):
        assert dumps_canonical(1.0) == "1"
        assert dumps_canonical(0.5) == "0.5"
        assert dumps_canonical(1 / 3) == "0.33333333333333331"
        assert dumps_canonical(np.float64(2.5)) == "2.5"
        assert dumps_canonical(np.int64(7)) == "7"

    def test_arrays_serialized_as_lists(self):
        text = dumps_canonical({"m": np.eye(2)})
        assert "[" in text and "1" in text

    def test_key_ordering_deterministic(self):
        a = dumps_canonical({"z": 1, "a": 2, "m": 3})
        b = dumps_canonical({"m": 3, "a": 2, "z": 1})
        assert a == b
