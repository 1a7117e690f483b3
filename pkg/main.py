# Load environment variables first
try:
    from dotenv import load_dotenv
    load_dotenv()
    DOTENV_AVAILABLE = True
except ImportError:
    DOTENV_AVAILABLE = False
    print("Warning: python-dotenv not available")

import logging
import os
from typing import Any, Dict

from fastapi import Body, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse

from services import commands, fixtures
from services.errors import NestedGraphError, UsageError
from services.random_generator import RandomSpec

logging.basicConfig(level=os.getenv("NGR_LOG_LEVEL", "INFO"))
logger = logging.getLogger(__name__)

app = FastAPI(title="Nested Graph API", description="Validation, composition and gluing of nested graphs")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],  # change this in prod
    allow_methods=["*"],
    allow_headers=["*"],
)


def _pair(payload: Dict[str, Any], first: str, second: str):
    missing = [key for key in (first, second) if key not in payload]
    if missing:
        raise HTTPException(status_code=400, detail=f"Request body needs keys: {', '.join(missing)}")
    return payload[first], payload[second]


def _call(name: str, handler, *docs):
    """Run a command, mapping engine errors to 422 with the error report"""
    try:
        return handler(*docs)
    except UsageError as e:
        raise HTTPException(status_code=400, detail=e.to_dict())
    except NestedGraphError as e:
        logger.warning(f"/{name} rejected input: {e}")
        raise HTTPException(status_code=422, detail=e.to_dict())


@app.post("/validate")
async def validate(payload: Dict[str, Any] = Body(...)):
    """Validate a graph, functor, morphism, square or diagram document"""
    return _call("validate", commands.validate, payload)


@app.post("/info")
async def info(payload: Dict[str, Any] = Body(...)):
    return _call("info", commands.info, payload)


@app.post("/decompose")
async def decompose(payload: Dict[str, Any] = Body(...)):
    """Canonical merger and contraction of an admissible epi-functor"""
    return _call("decompose", commands.decompose, payload)


@app.post("/compose")
async def compose(payload: Dict[str, Any] = Body(...)):
    """Composite of {"first": morphism, "second": morphism}, second after first"""
    first, second = _pair(payload, "first", "second")
    return _call("compose", commands.compose, first, second)


@app.post("/equal")
async def equal(payload: Dict[str, Any] = Body(...)):
    first, second = _pair(payload, "first", "second")
    return _call("equal", commands.equal, first, second)


@app.post("/restrict")
async def restrict(payload: Dict[str, Any] = Body(...)):
    """Square obtained by restricting {"morphism"} along {"dependency"}"""
    morphism, dependency = _pair(payload, "morphism", "dependency")
    return _call("restrict", commands.restrict, morphism, dependency)


@app.post("/glue")
async def glue(payload: Dict[str, Any] = Body(...)):
    return _call("glue", commands.glue_diagram, payload)


@app.post("/export-dot", response_class=PlainTextResponse)
async def export_dot(payload: Dict[str, Any] = Body(...)):
    return _call("export-dot", commands.export_dot, payload)


@app.post("/gen-random")
async def gen_random(payload: Dict[str, Any] = Body(default={})):
    """Random value for {"kind", "seed", "max_nodes", "max_flags", "max_grade"}"""
    kind, doc = _call("gen-random", lambda raw: commands.gen_random(RandomSpec.from_dict(raw)), payload)
    return {"kind": kind, "document": doc}


@app.get("/fixtures")
async def list_fixtures():
    return {"fixtures": fixtures.names()}


@app.get("/fixtures/{name}")
async def get_fixture(name: str):
    """Graph document of a named fixture"""
    if name not in fixtures.GRAPHS:
        raise HTTPException(status_code=404, detail=f"No fixture named {name}")
    return fixtures.GRAPHS[name]().to_dict()


@app.get("/")
async def root():
    """API health check"""
    return {
        "message": "Nested Graph API is running",
        "status": "healthy",
        "commands": list(commands.COMMANDS),
        "features": {
            "dotenv_available": DOTENV_AVAILABLE,
        },
    }


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host=os.getenv("NGR_HOST", "127.0.0.1"), port=int(os.getenv("NGR_PORT", "8000")))
