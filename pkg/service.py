"""
Analysis service
Dispatches classify, homology, one-relator and Alexander requests, builds the
reports shared by the command line and the web API, and runs batches
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from artin import (LabeledGraph, abelianization_structure, classify_finite_type, derived_generators_bound,
                   free_quotient_partition, odd_components, odd_dihedral_derived, odd_spanning_tree,
                   standard_presentation)
from config import config
from errors import AnalysisError, InputError, UnsupportedError
from homology import format_vector
from laurent import default_variable_names
from metabelian import analyze_artin, alexander_criterion, one_relator_verdict
from models import AnalysisRequest, AnalysisResponse, GraphFile, Report, Verdict
from utils import discover_fixtures, load_graph, parse_poly, parse_word, render_poly, render_word

logger = logging.getLogger(__name__)

EXIT_DECISIVE = 0
EXIT_INPUT_ERROR = 2
EXIT_INCONCLUSIVE = 3


def exit_code_for(verdict: Optional[Verdict]) -> int:
    if verdict is None or verdict.is_decisive:
        return EXIT_DECISIVE
    return EXIT_INCONCLUSIVE


def error_kind(error: Exception) -> str:
    if isinstance(error, InputError):
        return "input"
    if isinstance(error, UnsupportedError):
        return "unsupported"
    return "internal"


def exit_code_for_error(error: Exception) -> int:
    return EXIT_INPUT_ERROR if isinstance(error, InputError) else EXIT_INCONCLUSIVE


class AnalysisService:
    """Request dispatcher over the analysis pipelines"""

    def __init__(self, fixtures_dir: Optional[str] = None):
        self.fixtures_dir = Path(fixtures_dir or config.fixtures_dir)
        self.message_handlers: Dict[str, Callable[[Dict[str, Any]], Dict[str, Any]]] = {
            'classify': self.handle_classify,
            'homology': self.handle_homology,
            'onerel': self.handle_onerel,
            'alexander': self.handle_alexander,
            'list_fixtures': self.handle_list_fixtures,
        }

    def handle_request(self, request: AnalysisRequest) -> AnalysisResponse:
        """Run the handler for request.method; failures become the response error"""
        handler = self.message_handlers.get(request.method)
        if not handler:
            return AnalysisResponse(id=request.id, error=f"Unknown method: {request.method}",
                                    error_kind="input")
        try:
            result = handler(request.params)
            return AnalysisResponse(id=request.id, result=result)
        except AnalysisError as e:
            logger.error(f"Error handling {request.method} request: {e}")
            return AnalysisResponse(id=request.id, error=str(e), error_kind=error_kind(e))
        except Exception as e:
            logger.error(f"Unexpected failure in {request.method} request: {e}")
            return AnalysisResponse(id=request.id, error=str(e), error_kind="internal")

    # Parameter parsing

    def resolve_graph(self, params: Dict[str, Any]) -> LabeledGraph:
        """Graph from an inline `graph` object, a file `path` or a `fixture` name"""
        if params.get("graph") is not None:
            try:
                data = GraphFile.model_validate(params["graph"])
            except ValidationError as e:
                raise InputError(f"invalid graph: {e.errors()[0]['msg']}")
            return LabeledGraph.from_file(data)
        if params.get("path"):
            return load_graph(params["path"])
        if params.get("fixture"):
            return load_graph(self.fixtures_dir / "graphs" / f"{params['fixture']}.json")
        raise InputError("one of graph, path or fixture is required")

    # Reports

    def classify(self, g: LabeledGraph) -> Report:
        tags = classify_finite_type(g)
        m = abelianization_structure(g)
        components = [[g.names[v] for v in c] for c in odd_components(g)]
        if tags is None:
            headline = f"not of finite type; abelianization rank {m.rank}"
        else:
            headline = f"finite type: {' + '.join(str(t) for t in tags)}; abelianization rank {m.rank}"
        report = Report(command="classify", input=g.to_file().model_dump(), headline=headline)
        report.add_step("coxeter type", "not of finite type" if tags is None else ", ".join(str(t) for t in tags),
                        types=None if tags is None else [str(t) for t in tags])
        report.add_step("odd subgraph", f"{len(components)} component(s): "
                        + "; ".join("{" + ", ".join(c) + "}" for c in components), components=components)

        tree = odd_spanning_tree(g)
        if tree is not None:
            bound = derived_generators_bound(g)
            edges = sorted((g.names[min(u, v)], g.names[max(u, v)]) for u, v in tree.edges())
            report.add_step("generator bound", f"Γ' generated by at most {bound} elements",
                            bound=bound, tree=[list(e) for e in edges])
        if g.n == 2 and g.label(0, 1) % 2:
            dihedral = odd_dihedral_derived((g.label(0, 1) - 1) // 2)
            report.add_step("odd dihedral", f"Γ' free of rank {dihedral.rank}, relator {dihedral.render()}",
                            rank=dihedral.rank)
        partition = free_quotient_partition(g)
        if partition is not None:
            even, odd = partition
            report.add_step("parity partition", f"S0 = {{{', '.join(even)}}}, S1 = {{{', '.join(odd)}}}",
                            even=even, odd=odd)
        logger.info(f"classify {g.describe()}: {headline}")
        return report

    def homology(self, g: LabeledGraph, window: Optional[int] = None,
                 free_product: Optional[bool] = None) -> Report:
        window = config.window if window is None else window
        if free_product is None:
            free_product = config.free_product_convention
        analysis = analyze_artin(g, window, free_product)
        report = Report(command="homology", input=g.to_file().model_dump(), window=window,
                        structure=analysis.structure, verdict=analysis.verdict)
        presentation = standard_presentation(g, free_product)
        report.add_step("presentation", f"{len(presentation.relators)} relator(s)",
                        generators=presentation.generators, relators=presentation.render())
        report.add_step("abelianization", f"rank {analysis.rank}",
                        images={g.names[k]: list(abelianization_structure(g).image(k)) for k in range(g.n)})

        run = analysis.homology
        if run is not None:
            names = default_variable_names(run.chain.rank)
            report.add_step("chain", f"d1 and {len(run.chain.d2)} Fox row(s) over rank {run.chain.rank}",
                            d1=[f.format(names) for f in run.chain.d1],
                            d2=[run.chain.render_row(row) for row in run.chain.d2])
            labels = [f"u{k + 1}" for k in range(len(run.kernel))]
            report.add_step("kernel", f"ker d1 spanned by {len(run.kernel)} vector(s)",
                            basis=[run.chain.render_row(v) for v in run.kernel])
            report.add_step("relations", "im d2 in kernel coordinates",
                            rows=[format_vector(row, labels, run.chain.rank) for row in run.relations])
        report.add_step("structure", analysis.structure.describe(), certificate=analysis.structure.certificate)
        if g.n == 2 and g.label(0, 1) % 2:
            dihedral = odd_dihedral_derived((g.label(0, 1) - 1) // 2)
            report.add_step("derived group", f"Γ' free of rank {dihedral.rank}",
                            rank=dihedral.rank, relator=dihedral.render())
        for note in analysis.notes:
            report.add_step("note", note)

        report.headline = f"{analysis.structure.describe()}; {analysis.verdict.describe()}"
        report.exit_code = exit_code_for(analysis.verdict)
        return report

    def onerel(self, relator: str, generators: Optional[Sequence[str]] = None) -> Report:
        word, names = parse_word(relator, generators)
        if len(names) < 2:
            raise InputError("declare two generators for a one-relator presentation")
        verdict, poly = one_relator_verdict(word, ngens=len(names), names=names)
        report = Report(command="onerel", input={"generators": names, "relator": relator}, verdict=verdict)
        sums = word.exponent_sums(len(names))
        report.add_step("exponent sums", f"({sums[0]}, {sums[1]})", sums=sums)
        if "lambda" in verdict.data:
            report.add_step("lambda", f"lambda = {verdict.data['lambda']}")
        if "polygon" in verdict.data:
            report.add_step("newton polygon", f"vertices {verdict.data['polygon']}")
        if "f" in verdict.data:
            report.add_step("f", f"f = {verdict.data['f']}", basis=verdict.data.get("basis"))
        if "sigma_witness" in verdict.data:
            witness = verdict.data["sigma_witness"]
            report.add_step("sigma witness", f"lambda = {witness['lambda']}, chi = {witness['character']}")
        report.headline = f"{render_word(word, names)}: {verdict.describe()}"
        report.exit_code = exit_code_for(verdict)
        return report

    def alexander(self, poly: str, variable: str = "t") -> Report:
        delta = parse_poly(poly, [variable])
        verdict = alexander_criterion(delta)
        report = Report(command="alexander", input={"poly": poly, "variable": variable}, verdict=verdict)
        report.add_step("extremal coefficients",
                        f"leading {verdict.data['leading']}, trailing {verdict.data['trailing']}")
        report.headline = f"Δ = {render_poly(delta, [variable])}: {verdict.describe()}"
        report.exit_code = exit_code_for(verdict)
        return report

    # Handlers

    def handle_classify(self, params: Dict[str, Any]) -> Dict[str, Any]:
        return self.classify(self.resolve_graph(params)).model_dump(mode="json")

    def handle_homology(self, params: Dict[str, Any]) -> Dict[str, Any]:
        g = self.resolve_graph(params)
        return self.homology(g, params.get("window"), params.get("free_product")).model_dump(mode="json")

    def handle_onerel(self, params: Dict[str, Any]) -> Dict[str, Any]:
        relator = params.get("relator")
        if not relator:
            raise InputError("relator is required")
        return self.onerel(relator, params.get("generators")).model_dump(mode="json")

    def handle_alexander(self, params: Dict[str, Any]) -> Dict[str, Any]:
        poly = params.get("poly")
        if not poly:
            raise InputError("poly is required")
        return self.alexander(poly, params.get("variable", "t")).model_dump(mode="json")

    def handle_list_fixtures(self, params: Dict[str, Any]) -> Dict[str, Any]:
        result = {}
        for kind in ("graphs", "one_relator"):
            directory = self.fixtures_dir / kind
            result[kind] = [p.stem for p in discover_fixtures(directory)] if directory.is_dir() else []
        return result

    # Batch mode

    def _homology_file(self, path: Path, window: Optional[int], free_product: Optional[bool]) -> Report:
        try:
            return self.homology(load_graph(path), window, free_product)
        except AnalysisError as e:
            logger.error(f"{path}: {e}")
            return Report(command="homology", input={"path": str(path)}, window=window,
                          headline=f"{path.stem}: error: {e}", exit_code=exit_code_for_error(e))

    def run_batch(self, paths: Sequence[Path], window: Optional[int] = None,
                  free_product: Optional[bool] = None) -> List[Report]:
        """Homology reports for many graph files, in input order"""
        workers = max(1, min(config.batch_workers, len(paths) or 1))
        logger.info(f"running homology on {len(paths)} file(s) with {workers} worker(s)")
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda p: self._homology_file(Path(p), window, free_product), paths))
