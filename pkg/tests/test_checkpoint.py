import numpy as np
import pytest

import nlslab as nl
from nlslab.checkpoint import MAGIC, load_checkpoint, save_checkpoint


class TestCheckpoint:
    def test_roundtrip(self, grid2d, tmp_path):
        rng = np.random.default_rng(4)
        f = nl.from_frequency(grid2d, rng.normal(size=grid2d.shape) + 1j * rng.normal(size=grid2d.shape))
        path = tmp_path / "state.nlsf"
        save_checkpoint(f, path)
        g = load_checkpoint(path)
        assert g.grid == f.grid
        assert g.repr is f.repr
        assert np.array_equal(g.values, f.values)

    def test_physical_repr_preserved(self, grid1d, tmp_path):
        f = nl.gaussian_bump(grid1d, width=0.5)
        path = tmp_path / "state.nlsf"
        save_checkpoint(f, path)
        assert load_checkpoint(path).repr is nl.Repr.PHYSICAL

    def test_magic_and_header_checked(self, grid1d, tmp_path):
        f = nl.zeros(grid1d)
        path = tmp_path / "state.nlsf"
        save_checkpoint(f, path)
        raw = bytearray(path.read_bytes())
        assert raw[:4] == MAGIC
        raw[0] = ord("X")
        bad = tmp_path / "bad.nlsf"
        bad.write_bytes(bytes(raw))
        with pytest.raises(ValueError, match="magic"):
            load_checkpoint(bad)

    def test_truncation_detected(self, grid1d, tmp_path):
        f = nl.zeros(grid1d)
        path = tmp_path / "state.nlsf"
        save_checkpoint(f, path)
        raw = path.read_bytes()
        (tmp_path / "trunc.nlsf").write_bytes(raw[:-8])
        with pytest.raises(ValueError, match="payload"):
            load_checkpoint(tmp_path / "trunc.nlsf")
