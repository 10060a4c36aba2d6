"""On-disk cache for quotient streams.

One text file per family and bound::

    # primefrac-cache v1
    family: twin
    bound: 10000
    count: 410
    sha256: <hex digest of the body>
    3
    5
    ...

The body is the quotient lines, each ending in a newline.  Plain ASCII
decimals keep the files identical across platforms and readable by eye.
"""
from __future__ import annotations

import hashlib
import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .primes import PrimeFamily, QuotientStream, family_quotients, provenance_for

CACHE_VERSION = "v1"
HEADER = f"# primefrac-cache {CACHE_VERSION}"


class CorruptCacheError(RuntimeError):
    """A cache file failed its checksum or could not be parsed."""

    def __init__(self, path, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = Path(path)


@dataclass(frozen=True)
class CacheManifest:
    version: str
    family: str
    bound: str
    count: int
    sha256: str


def default_cache_dir() -> Path:
    env = os.environ.get("PRIMEFRAC_CACHE")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "primefrac"


def cache_path(family: PrimeFamily, directory) -> Path:
    stem = re.sub(r"[^A-Za-z0-9_.-]+", "_", f"{family.describe()}-{family.bound_text()}")
    return Path(directory) / f"{stem}.txt"


def _body(quotients) -> bytes:
    return "".join(f"{q}\n" for q in quotients).encode("ascii")


def write_stream(stream: QuotientStream, directory) -> CacheManifest:
    """Write ``stream`` atomically (temp file then rename) and return its manifest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    body = _body(stream.quotients)
    manifest = CacheManifest(
        CACHE_VERSION,
        stream.family.describe(),
        stream.family.bound_text(),
        len(stream.quotients),
        hashlib.sha256(body).hexdigest(),
    )
    head = (
        f"{HEADER}\nfamily: {manifest.family}\nbound: {manifest.bound}\n"
        f"count: {manifest.count}\nsha256: {manifest.sha256}\n"
    ).encode("ascii")
    target = cache_path(stream.family, directory)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".txt")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(head + body)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return manifest


def read_manifest(path) -> tuple[CacheManifest, bytes] | None:
    """Parse a cache file; None when it is from another format version."""
    raw = Path(path).read_bytes()
    lines = raw.split(b"\n", 5)
    if len(lines) < 6:
        raise CorruptCacheError(path, "truncated header")
    if lines[0].decode("ascii", "replace") != HEADER:
        if lines[0].startswith(b"# primefrac-cache "):
            return None
        raise CorruptCacheError(path, "not a primefrac cache file")
    fields = {}
    for key, line in zip(("family", "bound", "count", "sha256"), lines[1:5]):
        text = line.decode("ascii", "replace")
        prefix = f"{key}: "
        if not text.startswith(prefix):
            raise CorruptCacheError(path, f"expected {key!r} header")
        fields[key] = text[len(prefix):]
    try:
        count = int(fields["count"])
    except ValueError:
        raise CorruptCacheError(path, "bad count") from None
    manifest = CacheManifest(CACHE_VERSION, fields["family"], fields["bound"], count, fields["sha256"])
    return manifest, lines[5]


def read_stream(family: PrimeFamily, directory) -> QuotientStream | None:
    """Load a cached stream, or None if absent or from an older format.

    A checksum, count or family mismatch raises :class:`CorruptCacheError`;
    a damaged file is never partly reused.
    """
    path = cache_path(family, directory)
    if not path.exists():
        return None
    parsed = read_manifest(path)
    if parsed is None:
        return None
    manifest, body = parsed
    if hashlib.sha256(body).hexdigest() != manifest.sha256:
        raise CorruptCacheError(path, "checksum mismatch")
    if manifest.family != family.describe() or manifest.bound != family.bound_text():
        raise CorruptCacheError(path, "header does not match the requested family")
    try:
        quotients = tuple(int(line) for line in body.decode("ascii").split("\n")[:-1])
    except ValueError:
        raise CorruptCacheError(path, "non-numeric quotient line") from None
    if len(quotients) != manifest.count:
        raise CorruptCacheError(path, f"expected {manifest.count} quotients, found {len(quotients)}")
    return QuotientStream(family, quotients, provenance_for(family))


def cached_quotients(family: PrimeFamily, directory=None, use_cache: bool = True) -> QuotientStream:
    """The family's stream, from the cache when possible.

    ``use_cache=False`` regenerates and overwrites the cached copy.
    """
    directory = Path(directory) if directory is not None else default_cache_dir()
    if use_cache:
        stream = read_stream(family, directory)
        if stream is not None:
            return stream
    stream = family_quotients(family)
    write_stream(stream, directory)
    return stream
