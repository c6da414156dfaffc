"""Score tables: HT baseline, averaged PE/MT relative differences, paradigm rows."""

import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Mapping, Optional

from .corpus import AlignedDataset, MtParadigm, VariantKind
from .errors import ConfigurationError, IncompleteResultsError
from .metrics import HIGHER_IS_BETTER
from .stats import ci_significance, relative_difference, significance_mark

SCHEMA_VERSION = 1

# Row order and the blocks within which the best row is flagged.
ROW_BLOCKS = (
    ("HT",),
    ("PE", "MT"),
    ("PE-NMT", "PE-SMT", "PE-RBMT"),
    ("NMT", "SMT", "RBMT"),
)
_PARADIGMS = (MtParadigm.NMT, MtParadigm.SMT, MtParadigm.RBMT)


@dataclass(frozen=True)
class Row:
    group: str
    score: float
    relative: Optional[float]
    n_variants: int
    mark: str = ""
    best: bool = False


@dataclass(frozen=True)
class VariantScore:
    key: str
    kind: str
    paradigm: str
    score: float
    p_value: Optional[float] = None
    ci_lower: Optional[float] = None
    ci_upper: Optional[float] = None


@dataclass(frozen=True)
class ScoreTable:
    metric_id: str
    dataset: str
    direction: str
    higher_is_better: bool
    rows: tuple
    variants: tuple = ()
    significance: Optional[str] = None
    schema_version: int = field(default=SCHEMA_VERSION)

    def row(self, group: str) -> Row:
        for r in self.rows:
            if r.group == group:
                return r
        raise KeyError(group)

    @property
    def groups(self) -> tuple:
        return tuple(r.group for r in self.rows)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "ScoreTable":
        doc = dict(doc)
        doc["rows"] = tuple(Row(**r) for r in doc["rows"])
        doc["variants"] = tuple(VariantScore(**v) for v in doc.get("variants", ()))
        return cls(**doc)


def _score(value):
    return getattr(value, "corpus_score", value)


def _group_members(dataset: AlignedDataset):
    groups = {"PE": dataset.by_kind("PE"), "MT": dataset.by_kind("MT")}
    for paradigm in _PARADIGMS:
        groups[f"PE-{paradigm}"] = [v for v in groups["PE"] if v.paradigm is paradigm]
        groups[str(paradigm)] = [v for v in groups["MT"] if v.paradigm is paradigm]
    return groups


def build_table(dataset: AlignedDataset, results: Mapping, cis: Optional[Mapping] = None,
                ttests: Optional[Mapping] = None, metric_id: Optional[str] = None) -> ScoreTable:
    """Aggregate per-variant scores into a table.

    ``results`` maps variant keys (``TranslationVariant.key``) to a
    ``MetricResult`` or a plain number. Group rows average the variants'
    corpus-level scores and report the change relative to HT.

    ``ttests`` maps non-HT variant keys to the one-tailed paired test of
    HT against that variant (``None`` where the test was undefined); a
    group is marked by the weakest of its tests. ``cis`` maps every variant
    key, HT included, to a bootstrap interval; a group is marked ``†`` when
    the HT interval is not entirely above all of the group's intervals.
    """
    if cis is not None and ttests is not None:
        raise ValueError("pass either bootstrap intervals or t-tests, not both")
    hts = dataset.by_kind("HT")
    if len(hts) != 1:
        raise ConfigurationError(
            f"dataset {dataset.name!r} needs exactly one HT variant, found {len(hts)}")
    missing = [v.key for v in dataset.variants if v.key not in results]
    if missing:
        raise IncompleteResultsError(f"no result for variant(s) {', '.join(sorted(missing))}")
    if metric_id is None:
        ids = {getattr(r, "metric_id", None) for r in results.values()} - {None}
        if len(ids) != 1:
            raise ValueError("metric_id not given and not inferable from the results")
        metric_id = ids.pop()
    higher = HIGHER_IS_BETTER.get(metric_id, True)

    ht = hts[0]
    baseline = float(_score(results[ht.key]))
    rows = {"HT": Row("HT", baseline, None, 1)}
    for group, members in _group_members(dataset).items():
        if not members:
            continue
        mean = math.fsum(float(_score(results[v.key])) for v in members) / len(members)
        mark = ""
        if ttests is not None:
            tests = [ttests.get(v.key) for v in members]
            if all(t is not None for t in tests):
                mark = significance_mark(max(t.p_one_tailed for t in tests))
        elif cis is not None and ht.key in cis:
            others = [cis.get(v.key) for v in members]
            if all(o is not None for o in others) and not ci_significance(cis[ht.key], others):
                mark = "†"
        rows[group] = Row(group, mean, relative_difference(baseline, mean), len(members), mark)

    ordered = []
    for block in ROW_BLOCKS:
        present = [rows[g] for g in block if g in rows]
        if len(present) > 1:
            pick = max if higher else min
            best = pick(r.score for r in present)
            present = [Row(r.group, r.score, r.relative, r.n_variants, r.mark, r.score == best)
                       for r in present]
        ordered.extend(present)

    details = []
    for v in sorted(dataset.variants, key=lambda v: v.key):
        t = ttests.get(v.key) if ttests is not None else None
        ci = cis.get(v.key) if cis is not None else None
        details.append(VariantScore(
            v.key, str(v.kind), str(v.paradigm), float(_score(results[v.key])),
            p_value=None if t is None else t.p_one_tailed,
            ci_lower=None if ci is None else ci.lower,
            ci_upper=None if ci is None else ci.upper))
    significance = "paired_t_test" if ttests is not None else "bootstrap_ci" if cis is not None else None
    return ScoreTable(metric_id, dataset.name, dataset.direction, higher, tuple(ordered),
                      tuple(details), significance)


def format_value(row: Row) -> str:
    if row.relative is None:
        return f"{row.score:.4f}"
    return f"{row.relative:+.2f}%"


def _tsv(table: ScoreTable) -> str:
    out = io.StringIO()
    out.write("group\tvalue\tmark\tbest\tn_variants\n")
    for r in table.rows:
        out.write(f"{r.group}\t{format_value(r)}\t{r.mark}\t{int(r.best)}\t{r.n_variants}\n")
    return out.getvalue()


def _markdown(table: ScoreTable) -> str:
    title = f"{table.metric_id} ({table.dataset}, {table.direction})"
    lines = [f"| Translation type | {title} |", "|---|---:|"]
    for r in table.rows:
        cell = r.mark + format_value(r)
        if r.best:
            cell = f"**{cell}**"
        lines.append(f"| {r.group} | {cell} |")
    return "\n".join(lines) + "\n"


def render(table: ScoreTable, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(table.to_dict(), ensure_ascii=False, indent=2) + "\n"
    if fmt == "tsv":
        return _tsv(table)
    if fmt in ("markdown", "md"):
        return _markdown(table)
    raise ValueError(f"unknown output format {fmt!r}")


def parse_json(text: str) -> ScoreTable:
    return ScoreTable.from_dict(json.loads(text))
