import logging

from flask import Blueprint, current_app, request
from flask_restx import Api, Namespace, Resource, fields

from app.game.classifier import classify
from app.game.efficiency import efficient_graph
from app.game.payoff import node_utilities, total_utility
from app.game.pos import price_of_stability
from app.game.stability import is_pairwise_stable, predicted_stable_topologies
from app.models import ClassifierConfig, NetlabError, PosMethod, Topology
from app.utils import format_rational, get_timezone_timestamp
from app.utils.validation import validate_edges, validate_node_count, validate_params, validate_rational

logger = logging.getLogger(__name__)
api_bp = Blueprint("api", __name__)

# Initialize Flask-RESTX API
api = Api(
    api_bp,
    version="1.0",
    title="Netlab API",
    description="Read-only REST API for the strategic network-formation lab",
    doc="/swagger/",
    prefix="/api",
)

# Define API models for request/response documentation
health_model = api.model(
    "Health",
    {
        "status": fields.String(description="Health status", example="healthy"),
        "timestamp": fields.String(description="ISO timestamp", example="2024-01-01T00:00:00+00:00"),
    },
)

version_model = api.model(
    "Version",
    {
        "version": fields.String(description="Application version", example="0.1.0"),
        "name": fields.String(description="Application name", example="Netlab"),
    },
)

error_model = api.model(
    "Error",
    {
        "success": fields.Boolean(description="Success status", example=False),
        "error": fields.String(description="Error message", example="delta must lie in (0, 1), got 3/2"),
    },
)

graph_request = api.model(
    "GraphRequest",
    {
        "n": fields.Integer(required=True, description="Node count", example=4),
        "edges": fields.List(
            fields.List(fields.Integer), required=True, description="Edge list of [i, j] pairs", example=[[0, 1]]
        ),
    },
)

game_request = api.inherit(
    "GameRequest",
    graph_request,
    {
        "delta": fields.String(required=True, description="Link benefit as a rational", example="1/2"),
        "cost": fields.String(required=True, description="Link cost as a rational", example="3/10"),
    },
)

classify_request = api.inherit(
    "ClassifyRequest",
    graph_request,
    {"tau_fraction": fields.String(description="Near-structure threshold fraction", example="1/10")},
)

# Namespaces
health_ns = Namespace("health", description="Health and version endpoints")
analysis_ns = Namespace("analysis", description="Analytic predictions for (delta, cost)")
graph_ns = Namespace("graphs", description="Payoff, stability and classification of a given graph")

api.add_namespace(health_ns, path="/")
api.add_namespace(analysis_ns, path="/")
api.add_namespace(graph_ns, path="/")


def _error(message: str, status: int = 400):
    return {"success": False, "error": message}, status


def _query_params():
    """(delta, cost) from the query string, or an error response."""
    is_valid, error, params = validate_params(request.args.get("delta"), request.args.get("cost"))
    return (params, None) if is_valid else (None, _error(error))


def _json_body(operation: str):
    """Parsed JSON body, or an error response."""
    try:
        data = request.get_json()
    except Exception as json_error:
        logger.warning(f"Invalid JSON in {operation}: {str(json_error)}")
        return None, _error("Invalid JSON format")
    if not isinstance(data, dict):
        return None, _error("Request body must be a JSON object")
    return data, None


def _graph_from(data: dict):
    is_valid, error, graph = validate_edges(data.get("n"), data.get("edges"))
    return (graph, None) if is_valid else (None, _error(error))


@health_ns.route("health")
class Health(Resource):
    @health_ns.doc("health_check")
    @health_ns.marshal_with(health_model)
    def get(self):
        """Check API health status"""
        return {"status": "healthy", "timestamp": get_timezone_timestamp().isoformat()}


@health_ns.route("version")
class Version(Resource):
    @health_ns.doc("get_version")
    @health_ns.marshal_with(version_model)
    def get(self):
        """Get API version information"""
        return {"version": current_app.version, "name": "Netlab"}


@analysis_ns.route("regions")
class Regions(Resource):
    @analysis_ns.doc("get_regions")
    @analysis_ns.param("delta", "Link benefit in (0, 1)", type="string", required=True)
    @analysis_ns.param("cost", "Link cost in (0, 1)", type="string", required=True)
    @analysis_ns.response(400, "Invalid parameters", error_model)
    def get(self):
        """Region and predicted pairwise stable topologies"""
        params, error = _query_params()
        if error:
            return error
        prediction = predicted_stable_topologies(params)
        ordered = [t.value for t in Topology if t in prediction.topologies]
        return {"success": True, "region": prediction.region_id, "topologies": ordered}


@analysis_ns.route("efficiency")
class Efficiency(Resource):
    @analysis_ns.doc("get_efficiency")
    @analysis_ns.param("delta", "Link benefit in (0, 1)", type="string", required=True)
    @analysis_ns.param("cost", "Link cost in (0, 1)", type="string", required=True)
    @analysis_ns.param("n", "Node count", type="integer", required=True)
    @analysis_ns.response(400, "Invalid parameters", error_model)
    def get(self):
        """Closed-form efficient graph"""
        params, error = _query_params()
        if error:
            return error
        is_valid, message, n = validate_node_count(request.args.get("n"), minimum=2)
        if not is_valid:
            return _error(message)
        try:
            verdict = efficient_graph(params, n)
            return {
                "success": True,
                "label": verdict.label.value,
                "certainty": verdict.certainty.value,
                "region": verdict.region,
                "utility": format_rational(verdict.utility),
                "edges": [list(edge) for edge in verdict.graph.edges],
                "predicted": verdict.predicted.value if verdict.predicted else None,
                "candidates": [
                    {"label": c.label.value, "utility": format_rational(c.utility)} for c in verdict.candidates
                ],
            }
        except NetlabError as e:
            return _error(str(e))
        except Exception as e:
            logger.error(f"Error computing efficiency for {params}: {str(e)}", exc_info=True)
            return _error(str(e), 500)


@analysis_ns.route("pos")
class PriceOfStability(Resource):
    @analysis_ns.doc("get_pos")
    @analysis_ns.param("delta", "Link benefit in (0, 1)", type="string", required=True)
    @analysis_ns.param("cost", "Link cost in (0, 1)", type="string", required=True)
    @analysis_ns.param("n", "Node count", type="integer", required=True)
    @analysis_ns.param("method", "closed_form (default) or oracle", type="string", required=False)
    @analysis_ns.response(400, "Invalid parameters", error_model)
    def get(self):
        """Price of stability"""
        params, error = _query_params()
        if error:
            return error
        is_valid, message, n = validate_node_count(request.args.get("n"), minimum=2)
        if not is_valid:
            return _error(message)
        method_raw = request.args.get("method", PosMethod.CLOSED_FORM.value).strip().lower()
        if method_raw not in [m.value for m in PosMethod]:
            return _error(f"method must be one of {', '.join(m.value for m in PosMethod)}")
        try:
            verdict = price_of_stability(params, n, PosMethod(method_raw))
            return {
                "success": True,
                "kind": verdict.kind.value,
                "value": None if verdict.value is None else format_rational(verdict.value),
                "method": verdict.method.value,
                "region": verdict.region,
                "best_stable_utility": format_rational(verdict.best_stable_utility),
                "efficient_utility": format_rational(verdict.efficient_utility),
                "exhaustive": verdict.exhaustive,
            }
        except NetlabError as e:
            return _error(str(e))
        except Exception as e:
            logger.error(f"Error computing PoS for {params}, n={n}: {str(e)}", exc_info=True)
            return _error(str(e), 500)


@graph_ns.route("payoff")
class Payoff(Resource):
    @graph_ns.doc("post_payoff")
    @graph_ns.expect(game_request)
    @graph_ns.response(400, "Invalid input", error_model)
    def post(self):
        """Per-node utilities and total utility of a graph"""
        data, error = _json_body("payoff")
        if error:
            return error
        graph, error = _graph_from(data)
        if error:
            return error
        is_valid, message, params = validate_params(data.get("delta"), data.get("cost"))
        if not is_valid:
            return _error(message)
        utilities = node_utilities(graph, params)
        return {
            "success": True,
            "utilities": [format_rational(u) for u in utilities],
            "total": format_rational(total_utility(graph, params)),
        }


@graph_ns.route("stability")
class Stability(Resource):
    @graph_ns.doc("post_stability")
    @graph_ns.expect(game_request)
    @graph_ns.response(400, "Invalid input", error_model)
    def post(self):
        """Pairwise stability check with a profitable deviation as witness"""
        data, error = _json_body("stability")
        if error:
            return error
        graph, error = _graph_from(data)
        if error:
            return error
        is_valid, message, params = validate_params(data.get("delta"), data.get("cost"))
        if not is_valid:
            return _error(message)
        report = is_pairwise_stable(graph, params)
        witness = None
        if report.witness is not None:
            w = report.witness
            witness = {
                "kind": w.kind.value,
                "i": w.i,
                "j": w.j,
                "gain_i": format_rational(w.gain_i),
                "gain_j": format_rational(w.gain_j),
            }
        return {"success": True, "stable": report.stable, "witness": witness}


@graph_ns.route("classify")
class Classify(Resource):
    @graph_ns.doc("post_classify")
    @graph_ns.expect(classify_request)
    @graph_ns.response(400, "Invalid input", error_model)
    def post(self):
        """Structural classification of a graph"""
        data, error = _json_body("classify")
        if error:
            return error
        graph, error = _graph_from(data)
        if error:
            return error
        if graph.n < 2:
            return _error("Classification needs at least 2 nodes")
        cfg = ClassifierConfig()
        if data.get("tau_fraction") is not None:
            is_valid, message, fraction = validate_rational(data["tau_fraction"], "tau_fraction")
            if not is_valid or fraction < 0:
                return _error(message or "tau_fraction must be non-negative")
            cfg = ClassifierConfig(fraction)
        result = classify(graph, cfg)
        return {
            "success": True,
            "primary": result.primary.value,
            "all_matches": [label.value for label in sorted(result.all_matches, key=lambda label: label.rank)],
            "msd": {label.value: format_rational(value) for label, value in result.msd.items()},
            "threshold": format_rational(result.threshold),
            "colors": result.colors,
        }
