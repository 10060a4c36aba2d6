import hashlib

import pytest

from primefrac.cache import (
    HEADER,
    CorruptCacheError,
    cache_path,
    cached_quotients,
    default_cache_dir,
    read_stream,
    write_stream,
)
from primefrac.primes import PrimeFamily, QuotientStream, family_quotients


def test_twin_roundtrip(tmp_path):
    fam = PrimeFamily.twin(10**4)
    s = family_quotients(fam)
    m = write_stream(s, tmp_path)
    assert m.count == 410
    back = read_stream(fam, tmp_path)
    assert back.quotients == s.quotients
    assert back.provenance == s.provenance


def test_file_layout(tmp_path):
    fam = PrimeFamily.twin(20)
    write_stream(family_quotients(fam), tmp_path)
    text = cache_path(fam, tmp_path).read_text()
    body = "3\n5\n5\n7\n11\n13\n17\n19\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    assert text == f"{HEADER}\nfamily: twin\nbound: 20\ncount: 8\nsha256: {digest}\n{body}"


def test_empty_stream(tmp_path):
    fam = PrimeFamily.twin(2)
    m = write_stream(QuotientStream(fam, (), "none"), tmp_path)
    assert m.count == 0
    assert m.sha256 == hashlib.sha256(b"").hexdigest()
    assert read_stream(fam, tmp_path).quotients == ()


def test_tampered_digit_detected(tmp_path):
    fam = PrimeFamily.twin(10**4)
    write_stream(family_quotients(fam), tmp_path)
    path = cache_path(fam, tmp_path)
    lines = path.read_text().split("\n")
    lines[20] = lines[20][:-1] + str((int(lines[20][-1]) + 1) % 10)
    path.write_text("\n".join(lines))
    with pytest.raises(CorruptCacheError, match="checksum"):
        read_stream(fam, tmp_path)


def test_truncated_file_detected(tmp_path):
    fam = PrimeFamily.twin(100)
    write_stream(family_quotients(fam), tmp_path)
    path = cache_path(fam, tmp_path)
    path.write_text("# primefrac-cache v1\nfamily: twin\n")
    with pytest.raises(CorruptCacheError):
        read_stream(fam, tmp_path)


def test_other_version_is_regenerated(tmp_path):
    fam = PrimeFamily.twin(100)
    path = cache_path(fam, tmp_path)
    path.write_text("# primefrac-cache v0\nfamily: twin\nbound: 100\ncount: 1\nsha256: x\n3\n")
    assert read_stream(fam, tmp_path) is None
    s = cached_quotients(fam, tmp_path)
    assert s.quotients == family_quotients(fam).quotients
    assert path.read_text().startswith(HEADER)


def test_family_mismatch_is_corrupt(tmp_path):
    a, b = PrimeFamily.twin(100), PrimeFamily.all_primes(100)
    write_stream(family_quotients(a), tmp_path)
    cache_path(a, tmp_path).rename(cache_path(b, tmp_path))
    with pytest.raises(CorruptCacheError, match="family"):
        read_stream(b, tmp_path)


def test_cached_quotients_reuses_and_regenerates(tmp_path):
    fam = PrimeFamily.all_primes(1000)
    first = cached_quotients(fam, tmp_path)
    path = cache_path(fam, tmp_path)
    stamp = path.stat().st_mtime_ns
    assert cached_quotients(fam, tmp_path) == first
    assert path.stat().st_mtime_ns == stamp
    assert cached_quotients(fam, tmp_path, use_cache=False) == first


def test_no_temp_files_left(tmp_path):
    write_stream(family_quotients(PrimeFamily.mersenne(127)), tmp_path)
    assert [p.name for p in tmp_path.iterdir()] == ["mersenne-127.txt"]


def test_env_override(monkeypatch, tmp_path):
    monkeypatch.setenv("PRIMEFRAC_CACHE", str(tmp_path / "c"))
    assert default_cache_dir() == tmp_path / "c"
