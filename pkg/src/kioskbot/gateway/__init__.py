from .config import AppConfig, EngineConfig, load_config
from .runtime import SessionRuntime, VirtualClock, build_wiring
from .scenario import ScenarioResult, ScenarioScript, load_scenario, run_scenario
from .service import create_app

__all__ = [
    "AppConfig",
    "EngineConfig",
    "ScenarioResult",
    "ScenarioScript",
    "SessionRuntime",
    "VirtualClock",
    "build_wiring",
    "create_app",
    "load_config",
    "load_scenario",
    "run_scenario",
]
