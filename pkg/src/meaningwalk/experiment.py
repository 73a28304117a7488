"""Config-driven experiment runs with a digest manifest.

A run writes one artifact per (analysis, phi) into the output directory and
then ``manifest.json`` listing every file with its SHA-256. No timestamps or
absolute paths are recorded, so identical configs give identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from . import __version__
from .errors import ConfigError, DegenerateFitError, DisconnectedGraphError, GraphError, InfeasibleParametersError
from .info import mutual_information
from .lexicon import (
    BipartiteGraph,
    generate_contrast_graph,
    generate_mi_optimal,
    generate_random_bipartite,
    is_connected,
    read_edge_list,
    serialize,
)
from .laws import (
    check_bounds,
    check_meaning_frequency_law,
    loglog_points,
    mean_independence_check,
    meaning_frequency_pairs,
    zipf_chain_check,
)
from .probability import DISCUSSED_PHI_MAX, joint_probability, meaning_marginal, word_marginal
from .walk import WalkConfig, census_to_csv, empirical_joint, entropy_rate, simulate_walk, total_variation

ANALYSES = ("joint", "marginals", "walk", "mi", "law", "bounds", "mean-independence", "zipf-chain")
STOCHASTIC = {"walk"}
GENERATORS = ("random", "contrast", "mi-optimal")


@dataclass
class GraphSource:
    file: str | None = None
    generator: str | None = None
    params: dict[str, Any] = field(default_factory=dict)
    id: str | None = None

    @property
    def graph_id(self) -> str:
        if self.id:
            return self.id
        if self.file:
            return Path(self.file).stem
        return self.generator or "graph"


@dataclass
class ExperimentConfig:
    graph: GraphSource | None = None
    phi: list[float] = field(default_factory=lambda: [1.0])
    analyses: list[str] = field(default_factory=list)
    walk: dict[str, Any] = field(default_factory=dict)
    zipf_chain: dict[str, Any] = field(default_factory=lambda: {"alpha": 1.0, "gamma": 0.5, "ranks": 1000})
    sweep_phi: list[float] = field(default_factory=list)
    out: str = "results"
    seed: int | None = None
    format: str = "csv"

    def validate(self, *, need_analyses: bool = True) -> None:
        for phi in self.phi + self.sweep_phi:
            if not (isinstance(phi, (int, float)) and math.isfinite(phi) and phi >= 0):
                raise ConfigError(f"phi values must be finite and >= 0, got {phi!r}")
        if need_analyses and not self.analyses:
            raise ConfigError("select at least one analysis")
        unknown = sorted(set(self.analyses) - set(ANALYSES))
        if unknown:
            raise ConfigError(f"unknown analyses {unknown}; choose from {list(ANALYSES)}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        stochastic = bool(STOCHASTIC & set(self.analyses)) or (
            self.graph is not None and self.graph.generator == "random"
        )
        if stochastic and self.seed is None:
            raise ConfigError("a master seed is required for stochastic steps")
        if self.seed is not None and not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.graph is not None and self.graph.generator not in (None, *GENERATORS):
            raise ConfigError(f"unknown generator {self.graph.generator!r}")
        needs_graph = set(self.analyses) - {"zipf-chain"}
        if needs_graph and self.graph is None:
            raise ConfigError(f"analyses {sorted(needs_graph)} need a graph source")

    def echo(self) -> dict[str, Any]:
        """Config as recorded in the manifest (output directory omitted)."""
        d = asdict(self)
        d.pop("out")
        return d


def config_from_mapping(data: dict[str, Any], base_dir: Path | None = None) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    data = dict(data)
    graph = None
    gdata = data.pop("graph", None)
    if gdata is not None:
        if not isinstance(gdata, dict):
            raise ConfigError("graph must be a mapping")
        gdata = dict(gdata)
        file = gdata.pop("file", None)
        gen = gdata.pop("generator", None)
        gid = gdata.pop("id", None)
        if (file is None) == (gen is None):
            raise ConfigError("graph needs exactly one of 'file' or 'generator'")
        if file is not None and base_dir is not None and not Path(file).is_absolute():
            file = str(base_dir / file)
        graph = GraphSource(file=file, generator=gen, params=gdata, id=gid)
    sweep = data.pop("sweep", {}) or {}
    cfg = ExperimentConfig(graph=graph)
    try:
        if "phi" in data:
            phi = data.pop("phi")
            cfg.phi = [float(x) for x in (phi if isinstance(phi, list) else [phi])]
        cfg.analyses = list(data.pop("analyses", []))
        cfg.walk = dict(data.pop("walk", {}) or {})
        cfg.zipf_chain.update(data.pop("zipf_chain", {}) or {})
        cfg.sweep_phi = [float(x) for x in sweep.get("phi", [])]
        cfg.out = str(data.pop("out", cfg.out))
        cfg.seed = data.pop("seed", None)
        cfg.format = data.pop("format", cfg.format)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from exc
    if data:
        raise ConfigError(f"unknown config keys {sorted(data)}")
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    return config_from_mapping(data or {}, base_dir=path.parent)


def build_graph(source: GraphSource, seed: int | None) -> BipartiteGraph:
    if source.file is not None:
        return read_edge_list(source.file)
    p = source.params
    try:
        if source.generator == "random":
            seq = np.random.SeedSequence(seed).spawn(2)[0]
            return generate_random_bipartite(
                int(p["n"]), int(p["m"]), float(p["p"]), seq,
                require_connected=bool(p.get("connected", False)),
            )
        if source.generator == "contrast":
            return generate_contrast_graph(p["mu"])
        if source.generator == "mi-optimal":
            return generate_mi_optimal(int(p["n"]), int(p["m"]), int(p["d"]))
    except KeyError as exc:
        raise ConfigError(f"generator {source.generator!r} missing parameter {exc}") from exc
    except GraphError as exc:
        raise InfeasibleParametersError(str(exc)) from exc
    raise ConfigError(f"unknown generator {source.generator!r}")


def walk_seed(master_seed: int, phi_index: int) -> int:
    """Walk seed for the ``phi_index``-th phi, derived from the master seed only."""
    seq = np.random.SeedSequence(master_seed).spawn(2)[1].spawn(phi_index + 1)[phi_index]
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def _fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _table_text(header: list[str], rows: list[list[Any]], fmt: str) -> str:
    if fmt == "json":
        recs = [{h: _jsonable(v) for h, v in zip(header, r)} for r in rows]
        return json.dumps(recs, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows([[_fmt(v) for v in r] for r in rows])
    return buf.getvalue()


def _jsonable(v: Any) -> Any:
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else None
    return v


def _phi_tag(phi: float) -> str:
    return f"phi{phi:g}"


@dataclass
class Bundle:
    out_dir: Path
    files: list[dict[str, Any]] = field(default_factory=list)
    manifest: Path | None = None

    def add(self, name: str, text: str, **meta: Any) -> Path:
        path = self.out_dir / name
        data = text.encode()
        path.write_bytes(data)
        self.files.append({"path": name, "sha256": hashlib.sha256(data).hexdigest(), **meta})
        return path

    def finish(self, command: str, config: ExperimentConfig, extra: dict[str, Any] | None = None) -> Path:
        manifest = {
            "tool": "meaningwalk",
            "version": __version__,
            "command": command,
            "config": config.echo(),
            "files": self.files,
        }
        if extra:
            manifest.update(extra)
        path = self.out_dir / "manifest.json"
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=_jsonable) + "\n")
        self.manifest = path
        return path


def _analysis_cell(analysis: str, g: BipartiteGraph, gid: str, phi: float, k: int,
                   cfg: ExperimentConfig, bundle: Bundle) -> None:
    ext = cfg.format
    tag = _phi_tag(phi)
    name = f"{analysis}_{tag}.{ext}"
    meta = {"analysis": analysis, "phi": phi}
    outside = phi > DISCUSSED_PHI_MAX

    if analysis == "joint":
        joint = joint_probability(g, phi)
        header = ["graph_id", "phi", "i", "j", "p"]
        rows = [[gid, phi, i, j, joint.probs[i, j]] for i, j in g.edges]
        bundle.add(name, _table_text(header, rows, ext), **meta)
    elif analysis == "marginals":
        joint = joint_probability(g, phi)
        rows = [[gid, phi, "word", i, x] for i, x in enumerate(word_marginal(joint))]
        rows += [[gid, phi, "meaning", j, x] for j, x in enumerate(meaning_marginal(joint))]
        bundle.add(name, _table_text(["graph_id", "phi", "kind", "index", "p"], rows, ext), **meta)
    elif analysis == "mi":
        rec = mutual_information(joint_probability(g, phi)).as_record()
        rec.update(graph_id=gid, phi=phi, phi_outside_discussed_range=outside)
        if ext == "json":
            text = json.dumps({k_: _jsonable(v) for k_, v in rec.items()}, indent=2, sort_keys=True) + "\n"
        else:
            text = _table_text(["key", "value"], [[k_, rec[k_]] for k_ in sorted(rec)], ext)
        bundle.add(name, text, **meta)
    elif analysis == "bounds":
        b = check_bounds(g, phi)
        header = ["graph_id", "phi", "word", "mu", "p", "lower", "upper", "satisfied",
                  "t_min", "t_max", "gap_ratio", "b1", "b2", "degree_bounds_satisfied"]
        rows = [
            [gid, phi, i, int(g.word_degrees[i]), b.word_probability[i], b.lower[i], b.upper[i],
             bool(b.satisfied[i]), b.t_min, b.t_max, b.gap_ratio, b.b1, b.b2,
             bool(b.degree_bounds_satisfied[i])]
            for i in range(g.n)
        ]
        bundle.add(name, _table_text(header, rows, ext), **meta)
    elif analysis == "law":
        header = ["graph_id", "phi", "predicted_delta", "delta_hat", "intercept", "r_squared",
                  "mirror_exponent", "mirror_intercept", "point_count", "degenerate",
                  "gap_ratio", "phi_outside_discussed_range"]
        try:
            rep = check_meaning_frequency_law(g, phi)
        except DegenerateFitError:
            row = [gid, phi, 1 / (phi + 1), None, None, None, None, None, g.n, True,
                   check_bounds(g, phi).gap_ratio, outside]
        else:
            row = [gid, phi, rep.predicted_delta, rep.fit.exponent, rep.fit.intercept, rep.fit.r_squared,
                   rep.mirror_fit.exponent, rep.mirror_fit.intercept, rep.fit.point_count, False,
                   rep.bounds.gap_ratio, outside]
        bundle.add(name, _table_text(header, [row], ext), **meta)
        pts = loglog_points(meaning_frequency_pairs(g, phi))
        plot = _table_text(["log_x", "log_y"], pts.tolist(), "csv")
        bundle.add(f"law_{tag}_loglog.csv", plot, analysis="law-plot-data", phi=phi)
    elif analysis == "mean-independence":
        rep = mean_independence_check(g, phi)
        header = ["graph_id", "phi", "mu", "mean_omega_phi_given_mu", "mean_p_given_mu",
                  "predicted_p", "mean_independent", "law_holds"]
        rows = [[gid, phi, *r, rep.mean_independent, rep.law_holds] for r in rep.table()]
        bundle.add(name, _table_text(header, rows, ext), **meta)
    elif analysis == "walk":
        w = cfg.walk
        wc = WalkConfig(
            steps=int(w.get("steps", 100_000)),
            phi=phi,
            burn_in=w.get("burn_in"),
            start=str(w.get("start", "words")),
            master_seed=walk_seed(cfg.seed, k),
            chains=int(w.get("chains", 1)),
        )
        census = simulate_walk(g, wc)
        tv = total_variation(empirical_joint(census), joint_probability(g, phi).probs)
        if ext == "json":
            text = json.dumps({
                "graph_id": gid, "phi": phi, "config": asdict(wc),
                "recorded_steps": census.recorded_steps,
                "word_visits": census.word_visits.tolist(),
                "meaning_visits": census.meaning_visits.tolist(),
                "pair_transits": [[i, j, c] for (i, j), c in zip(g.edges, census.pair_transits.tolist())],
                "tv_distance": tv,
            }, indent=2, sort_keys=True) + "\n"
        else:
            text = f"# graph_id={gid} tv_distance={tv:.17g}\n" + census_to_csv(census)
        bundle.add(name, text, **meta)
    else:
        raise ConfigError(f"unknown analysis {analysis!r}")


def run(cfg: ExperimentConfig, command: str = "analyze") -> Bundle:
    """Run every selected analysis for every phi and write the manifest last."""
    cfg.validate()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    bundle = Bundle(out)
    per_phi = [a for a in ANALYSES if a in cfg.analyses and a != "zipf-chain"]
    if per_phi:
        g = build_graph(cfg.graph, cfg.seed)
        if "walk" in per_phi:
            g.require_no_isolated_words()
            if not is_connected(g):
                raise DisconnectedGraphError("walk requested on a disconnected graph")
        gid = cfg.graph.graph_id
        for k, phi in enumerate(cfg.phi):
            for analysis in per_phi:
                _analysis_cell(analysis, g, gid, phi, k, cfg, bundle)
    if "zipf-chain" in cfg.analyses:
        z = cfg.zipf_chain
        fit = zipf_chain_check(float(z["alpha"]), float(z["gamma"]), int(z["ranks"]))
        header = ["alpha", "gamma", "rank_count", "predicted_delta", "delta_hat", "intercept", "r_squared"]
        row = [float(z["alpha"]), float(z["gamma"]), int(z["ranks"]),
               float(z["gamma"]) / float(z["alpha"]), fit.exponent, fit.intercept, fit.r_squared]
        bundle.add(f"zipf_chain.{cfg.format}", _table_text(header, [row], cfg.format), analysis="zipf-chain")
    bundle.finish(command, cfg)
    return bundle


SWEEP_HEADER = ["graph_id", "phi", "delta_hat", "predicted_delta", "degenerate", "gap_ratio",
                "mutual_info", "entropy_rate", "phi_outside_discussed_range"]


def sweep_phi(cfg: ExperimentConfig, phi_grid: list[float] | None = None) -> list[dict[str, Any]]:
    """One row per phi: fitted delta, bound gap ratio, I(S,R) and entropy rate.

    ``delta_hat`` is ``None`` with ``degenerate=True`` when all word degrees
    coincide; ``entropy_rate`` is ``None`` on disconnected graphs.
    """
    grid = list(cfg.phi if phi_grid is None else phi_grid)
    if cfg.graph is None:
        raise ConfigError("sweep needs a graph source")
    g = build_graph(cfg.graph, cfg.seed)
    connected = is_connected(g)
    rows = []
    for phi in grid:
        if not (math.isfinite(phi) and phi >= 0):
            raise ConfigError(f"phi values must be finite and >= 0, got {phi!r}")
        try:
            delta, degenerate = check_meaning_frequency_law(g, phi).delta, False
        except DegenerateFitError:
            delta, degenerate = None, True
        rows.append({
            "graph_id": cfg.graph.graph_id,
            "phi": float(phi),
            "delta_hat": delta,
            "predicted_delta": 1.0 / (phi + 1.0),
            "degenerate": degenerate,
            "gap_ratio": check_bounds(g, phi).gap_ratio,
            "mutual_info": mutual_information(joint_probability(g, phi)).mutual_info,
            "entropy_rate": entropy_rate(g, phi) if connected else None,
            "phi_outside_discussed_range": phi > DISCUSSED_PHI_MAX,
        })
    return rows


def run_sweep(cfg: ExperimentConfig, phi_grid: list[float] | None = None) -> Bundle:
    grid = list(phi_grid if phi_grid is not None else (cfg.sweep_phi or cfg.phi))
    cfg.validate(need_analyses=False)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    bundle = Bundle(out)
    rows = sweep_phi(cfg, grid)
    text = _table_text(SWEEP_HEADER, [[r[h] for h in SWEEP_HEADER] for r in rows], cfg.format)
    bundle.add(f"sweep.{cfg.format}", text, analysis="sweep")
    bundle.finish("sweep", cfg, {"phi_grid": grid})
    return bundle


def run_generate(cfg: ExperimentConfig) -> Bundle:
    cfg.validate(need_analyses=False)
    if cfg.graph is None or cfg.graph.generator is None:
        raise ConfigError("generate needs a graph generator spec")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    bundle = Bundle(out)
    g = build_graph(cfg.graph, cfg.seed)
    bundle.add(f"{cfg.graph.graph_id}.txt", serialize(g), analysis="graph")
    bundle.finish("generate", cfg)
    return bundle
