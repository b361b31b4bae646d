from flask import Flask, request, jsonify
import logging
import os

from qwonder import __version__
from qwonder.cli import COMMANDS, error_payload, run_command
from qwonder.engine_config import EngineConfig
from qwonder.errors import InvariantViolation, QwonderError, UserInputError, VerificationFailure
from qwonder.verification import SUITES, verify

app = Flask(__name__)
app.config['MAX_CONTENT_LENGTH'] = 1 * 1024 * 1024  # 1MB max request body
app.config['JSON_SORT_KEYS'] = True

# Basic logging - console only (serverless filesystems are read-only)
logging.basicConfig(
    level=getattr(logging, EngineConfig.get_log_level(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.StreamHandler()
    ]
)
logger = logging.getLogger(__name__)


def _error_response(e):
    """Map package errors onto HTTP statuses"""
    if isinstance(e, VerificationFailure):
        return jsonify(e.report), 200
    if isinstance(e, UserInputError):
        return jsonify(error_payload(e)), 400
    return jsonify(error_payload(e)), 500


@app.route('/', methods=['GET'])
def health():
    """Health check with the engine configuration"""
    return jsonify({
        'status': 'ok',
        'version': __version__,
        'commands': sorted(COMMANDS),
        'suites': list(SUITES),
        'config': EngineConfig.get_all_config(),
    })


@app.route('/api/<subcommand>', methods=['POST'])
def api_command(subcommand):
    """Run a subcommand; the JSON body carries the same keys as the CLI arguments"""
    try:
        if subcommand not in COMMANDS:
            return jsonify({'error': f"Unknown subcommand '{subcommand}'"}), 404

        params = request.get_json(silent=True)
        if params is None:
            params = {}
        if not isinstance(params, dict):
            return jsonify({'error': 'Request body must be a JSON object'}), 400

        # Module descriptions are inline here; file paths are a CLI convenience
        if subcommand == 'torsion' and not isinstance(params.get('module'), dict):
            return jsonify({'error': "torsion needs an inline 'module' object"}), 400

        logger.info(f"API {subcommand} request")
        return jsonify(run_command(subcommand, params))
    except QwonderError as e:
        if isinstance(e, InvariantViolation):
            logger.exception(f"Invariant violation in {subcommand}")
        return _error_response(e)
    except Exception as e:
        logger.exception(f"Error in {subcommand}")
        return jsonify({'error': str(e)}), 500


@app.route('/api/verify/<suite>', methods=['GET'])
def api_verify(suite):
    """Run one verification suite (or 'all'); failures come back with passed: false"""
    try:
        if suite != 'all' and suite not in SUITES:
            return jsonify({'error': f"Unknown suite '{suite}'"}), 404
        jobs = request.args.get('jobs', 1, type=int)
        return jsonify(verify(suite, jobs))
    except QwonderError as e:
        return _error_response(e)
    except Exception as e:
        logger.exception(f"Error running suite {suite}")
        return jsonify({'error': str(e)}), 500


if __name__ == '__main__':
    port = int(os.environ.get('PORT', 5000))
    # Disable debug mode in production
    debug = os.environ.get('FLASK_DEBUG', 'False').lower() == 'true'

    app.run(debug=debug, host='0.0.0.0', port=port)
