"""HTTP surface for brackets, tables, verification and algebra descriptions."""

import logging
from datetime import datetime

from dotenv import load_dotenv
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from app import __version__
from app.cli import cmd_bracket
from app.config import CliConfig, family_from_settings, get_settings
from app.expr import ExprContext
from app.families import list_families
from app.finite_lie import describe, parse_algebra_spec
from app.models import (
    AlgebraDescription,
    APIInfoResponse,
    BracketRequest,
    BracketResponse,
    HealthResponse,
    TableDocument,
    TableRequest,
    VerifyRequest,
    VerifyResponse,
)
from app.tables import build_table
from app.verification import Verifier

# Load environment variables
load_dotenv()

settings = get_settings()

logging.basicConfig(
    level=settings.log_level, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

API_TITLE = "KN Current Algebras"
API_VERSION = __version__
API_DESCRIPTION = (
    "Exact structure constants, cocycles and verification sweeps for "
    "Krichever-Novikov type current algebras"
)

app = FastAPI(
    title=API_TITLE,
    version=API_VERSION,
    description=API_DESCRIPTION,
    docs_url="/docs" if settings.debug else None,
    redoc_url="/redoc" if settings.debug else None,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.on_event("startup")
async def startup_event():
    """Log startup information."""
    logger.info(f"Starting {API_TITLE} v{API_VERSION}")
    logger.info(f"Environment: {settings.environment}")
    logger.info(f"Default family: {settings.default_family}")
    logger.info(f"Workers: {settings.max_workers}, product cache: {settings.product_cache}")


@app.get("/", response_model=dict)
async def root():
    """Root endpoint with basic API information."""
    return {
        "message": API_TITLE,
        "version": API_VERSION,
        "docs": "/docs" if settings.debug else "disabled",
        "health": "/health",
        "api_info": "/v1/",
    }


@app.get("/health", response_model=HealthResponse)
async def health_check():
    """Health check endpoint for monitoring."""
    return HealthResponse(
        status="healthy",
        timestamp=datetime.utcnow().isoformat(),
        version=API_VERSION,
        environment=settings.environment,
        default_family=settings.default_family,
    )


@app.get("/v1/", response_model=APIInfoResponse)
async def api_info():
    """API information and available endpoints."""
    return APIInfoResponse(
        version=API_VERSION,
        endpoints={
            "bracket": "POST /v1/bracket",
            "table": "POST /v1/table",
            "verify": "POST /v1/verify",
            "describe": "GET /v1/describe/{algebra}",
            "health": "GET /health",
        },
        families=list_families(),
    )


def _bad_request(e: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(e))


def _internal_error(what: str, e: Exception) -> HTTPException:
    logger.error(f"Unexpected error in {what}: {e}")
    return HTTPException(status_code=500, detail="Internal computation error")


@app.post("/v1/bracket", response_model=BracketResponse)
def bracket(request: BracketRequest):
    """Evaluate ``lhs``, or bracket ``lhs`` with ``rhs``, and render canonically."""
    try:
        config = CliConfig(
            family=request.family,
            algebra=request.algebra,
            window=settings.default_window,
            assignments=request.assignments,
            extended=request.extended,
        )
        result = cmd_bracket(config, request.lhs, request.rhs)
    except ValueError as e:
        raise _bad_request(e) from e
    except Exception as e:
        raise _internal_error("bracket", e) from e
    return BracketResponse(
        result=result, family=request.family, algebra=request.algebra, extended=request.extended
    )


@app.post("/v1/table", response_model=TableDocument)
def table(request: TableRequest):
    """Product, cocycle or sl(2) relation table over a window."""
    try:
        config = CliConfig(
            family=request.family,
            algebra="sl2",
            window=request.window,
            assignments=request.assignments,
            extended=request.extended,
        )
        family = family_from_settings(config.family)
        return build_table(
            request.kind, family, config.window, config.extended, config.assignments
        )
    except ValueError as e:
        raise _bad_request(e) from e
    except Exception as e:
        raise _internal_error("table", e) from e


@app.post("/v1/verify", response_model=VerifyResponse)
def verify(request: VerifyRequest):
    """Run verification suites; violations come back as data with ``clean: false``."""
    try:
        config = CliConfig(family=request.family, algebra=request.algebra, window=request.window)
        context = ExprContext.from_config(config)
        verifier = Verifier(
            context.family,
            context.algebra,
            config.window,
            sample=request.sample,
            corrupt_cocycle=request.corrupt_cocycle,
        )
        return verifier.run_all(request.checks)
    except ValueError as e:
        raise _bad_request(e) from e
    except Exception as e:
        raise _internal_error("verify", e) from e


@app.get("/v1/describe/{algebra}", response_model=AlgebraDescription)
async def describe_algebra(algebra: str):
    """Basis, summands and structure constants of a Lie algebra."""
    try:
        return AlgebraDescription(**describe(parse_algebra_spec(algebra)))
    except ValueError as e:
        raise _bad_request(e) from e


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("app.main:app", host="0.0.0.0", port=8000, reload=settings.debug)
