"""
Web API for the metabelian-top analysis
"""

import logging

from flask import Flask, jsonify, request

from config import config
from models import AnalysisRequest
from service import AnalysisService

app = Flask(__name__)
logger = logging.getLogger(__name__)

STATUS_BY_KIND = {"input": 400, "unsupported": 422, "internal": 500}

# Global service instance
service = AnalysisService()


def dispatch(method: str, params: dict):
    """Run one service request and translate its error kind into an HTTP status"""
    response = service.handle_request(AnalysisRequest(method=method, params=params))
    if response.error is not None:
        status = STATUS_BY_KIND.get(response.error_kind, 500)
        return jsonify({"error": response.error, "kind": response.error_kind}), status
    return jsonify(response.result)


def body() -> dict:
    data = request.get_json(silent=True)
    return data if isinstance(data, dict) else {}


@app.route('/')
def index():
    """List the available endpoints"""
    return jsonify({"endpoints": ["/api/fixtures", "/api/classify", "/api/homology",
                                  "/api/onerel", "/api/alexander"]})


@app.route('/api/fixtures')
def list_fixtures():
    return dispatch("list_fixtures", {})


@app.route('/api/classify', methods=['POST'])
def classify():
    """Finite type and abelianization of a graph given as the request body"""
    data = body()
    params = {"graph": data} if "vertices" in data else data
    return dispatch("classify", params)


@app.route('/api/homology', methods=['POST'])
def homology():
    """Γ'_ab and verdict; the body is a graph, optionally wrapped as {"graph": ..., "window": ...}"""
    data = body()
    if "vertices" in data:
        params = {"graph": {k: v for k, v in data.items() if k != "window"}, "window": data.get("window")}
    else:
        params = data
    return dispatch("homology", params)


@app.route('/api/onerel', methods=['POST'])
def onerel():
    return dispatch("onerel", body())


@app.route('/api/alexander', methods=['POST'])
def alexander():
    return dispatch("alexander", body())


if __name__ == '__main__':
    web = config.get_web_config()
    app.run(host=web["host"], port=web["port"], debug=False, threaded=True)
