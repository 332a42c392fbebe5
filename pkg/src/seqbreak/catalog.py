"""On-disk catalog of raw series, representations and the interval index.

Layout under the catalog root::

    MANIFEST          one tab-separated line per entry
    raw/<id>.txt      samples, one per line
    rep/<id>.rep      representation file
    index.idx         interval index
    .lock             advisory lock held by writers

Manifest columns are ``id``, raw sha256, representation sha256 (or ``-``),
signature (or ``-``) and the comma-separated interval list (or ``-``).
"""

from __future__ import annotations

import contextlib
import fcntl
import hashlib
import os
import re
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import DuplicateId, ParseError, UnknownId
from .peakindex import IntervalIndex, read_index, write_index
from .segmenter import RepresentedSequence, format_representation, parse_representation
from .seqcore import TimeSeries, apply_normalization, format_series, parse_series, read_series

ENV_HOME = "SEQBREAK_HOME"
ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


def default_root() -> Path:
    return Path(os.environ.get(ENV_HOME) or Path.home() / ".seqbreak")


def _sha(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class Entry:
    id: str
    raw_sha: str
    rep_sha: str | None = None
    signature: str | None = None
    intervals: tuple[int, ...] | None = None

    def to_line(self) -> str:
        ivals = "-" if self.intervals is None else ",".join(map(str, self.intervals))
        return "\t".join([self.id, self.raw_sha, self.rep_sha or "-", self.signature or "-", ivals])

    @classmethod
    def from_line(cls, line: str) -> "Entry":
        id_, raw, rep, sig, ivals = line.split("\t")
        if ivals == "-":
            parsed = None
        elif ivals == "":
            parsed = ()
        else:
            parsed = tuple(int(x) for x in ivals.split(","))
        return cls(id_, raw, None if rep == "-" else rep, None if sig == "-" else sig, parsed)


class Catalog:
    def __init__(self, root=None):
        self.root = Path(root) if root is not None else default_root()
        self.entries: dict[str, Entry] = {}
        self._load_manifest()

    @property
    def manifest_path(self) -> Path:
        return self.root / "MANIFEST"

    @property
    def index_path(self) -> Path:
        return self.root / "index.idx"

    def raw_path(self, id: str) -> Path:
        return self.root / "raw" / f"{id}.txt"

    def rep_path(self, id: str) -> Path:
        return self.root / "rep" / f"{id}.rep"

    def _load_manifest(self):
        self.entries = {}
        if not self.manifest_path.exists():
            return
        for lineno, line in enumerate(self.manifest_path.read_text("utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                entry = Entry.from_line(line)
            except ValueError:
                raise ParseError(f"bad manifest line {line!r}", self.manifest_path, lineno) from None
            self.entries[entry.id] = entry

    def _save_manifest(self):
        text = "".join(self.entries[k].to_line() + "\n" for k in sorted(self.entries))
        _atomic_write(self.manifest_path, text.encode("utf-8"))

    @contextlib.contextmanager
    def writing(self):
        """Hold the writer lock and reload the manifest for the duration."""
        self.root.mkdir(parents=True, exist_ok=True)
        with open(self.root / ".lock", "w") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                self._load_manifest()
                yield self
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def ids(self) -> list[str]:
        return sorted(self.entries)

    def entry(self, id: str) -> Entry:
        try:
            return self.entries[id]
        except KeyError:
            raise UnknownId(id) from None

    # -- writes ---------------------------------------------------------

    def add_series(self, series: TimeSeries) -> Entry:
        if not ID_RE.match(series.id):
            raise ValueError(f"ids may only contain letters, digits, '_', '.', '-': {series.id!r}")
        with self.writing():
            if series.id in self.entries:
                raise DuplicateId(series.id)
            data = format_series(series).encode("utf-8")
            self.raw_path(series.id).parent.mkdir(parents=True, exist_ok=True)
            _atomic_write(self.raw_path(series.id), data)
            entry = Entry(series.id, _sha(data))
            self.entries[series.id] = entry
            self._save_manifest()
        return entry

    def ingest(self, path, id: str | None = None) -> Entry:
        return self.add_series(read_series(path, id))

    def save_representation(self, rep: RepresentedSequence, signature: str | None = None) -> Entry:
        with self.writing():
            entry = self.entry(rep.source_id)
            data = format_representation(rep).encode("utf-8")
            self.rep_path(rep.source_id).parent.mkdir(parents=True, exist_ok=True)
            _atomic_write(self.rep_path(rep.source_id), data)
            # a new representation invalidates the old interval list
            entry = replace(entry, rep_sha=_sha(data), signature=signature, intervals=None)
            self.entries[entry.id] = entry
            self._save_manifest()
        return entry

    def save_index(self, index: IntervalIndex, interval_lists: dict[str, list[int]]) -> None:
        with self.writing():
            for id_, ivals in interval_lists.items():
                self.entries[id_] = replace(self.entry(id_), intervals=tuple(ivals))
            write_index(index, self.index_path.with_suffix(".tmp"))
            os.replace(self.index_path.with_suffix(".tmp"), self.index_path)
            self._save_manifest()

    # -- reads ----------------------------------------------------------

    def load_series(self, id: str) -> TimeSeries:
        self.entry(id)
        path = self.raw_path(id)
        return parse_series(path.read_text("utf-8"), id, path)

    def has_representation(self, id: str) -> bool:
        return self.entry(id).rep_sha is not None

    def load_representation(self, id: str) -> RepresentedSequence:
        if not self.has_representation(id):
            raise UnknownId(f"{id} (not segmented)")
        path = self.rep_path(id)
        return parse_representation(path.read_text("utf-8"), path)

    def series_for(self, rep: RepresentedSequence) -> TimeSeries:
        """Raw series in the units the representation was built in."""
        series = self.load_series(rep.source_id)
        return series if rep.norm is None else apply_normalization(series, rep.norm)

    def load_index(self) -> IntervalIndex:
        if not self.index_path.exists():
            raise UnknownId("index (run 'seqbreak index' first)")
        return read_index(self.index_path)

    def verify(self) -> list[str]:
        """Problems found: missing files, checksum mismatches, unparsable files."""
        problems = []
        for id_ in self.ids():
            entry = self.entries[id_]
            checks = [(self.raw_path(id_), entry.raw_sha, self.load_series)]
            if entry.rep_sha:
                checks.append((self.rep_path(id_), entry.rep_sha, self.load_representation))
            for path, sha, loader in checks:
                if not path.exists():
                    problems.append(f"{id_}: missing {path.name}")
                    continue
                if _sha(path.read_bytes()) != sha:
                    problems.append(f"{id_}: checksum mismatch for {path.name}")
                try:
                    loader(id_)
                except ParseError as exc:
                    problems.append(f"{id_}: {exc}")
        return problems


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
