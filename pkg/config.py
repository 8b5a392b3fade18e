"""
Configuration settings for the metabelian-top analysis
"""

import logging
import os
from typing import Any, Dict, Mapping

from pydantic import BaseModel, ValidationError

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class AnalysisConfig(BaseModel):
    """Tunable parameters of the homology and verdict pipelines"""

    # Membership search
    window: int = 6  # monomial exponents range over [-window, window]
    max_search_unknowns: int = 600  # larger integer systems are skipped

    # Reduction and tower elimination
    max_reduction_rounds: int = 200
    max_tower_steps: int = 64

    # Structural certificates
    max_spanning_trees: int = 2000

    # Non-edges carry no relation instead of the commuting relation
    free_product_convention: bool = False

    # Fixtures and batch mode
    fixtures_dir: str = "fixtures"
    batch_workers: int = 4

    # Logging configuration
    log_level: str = "INFO"
    log_file: str = "artin_metabelian.log"

    # Web interface configuration
    web_host: str = "0.0.0.0"
    web_port: int = 5000

    def get_search_config(self) -> Dict[str, Any]:
        """Get membership search limits"""
        return {
            "window": self.window,
            "max_unknowns": self.max_search_unknowns,
        }

    def get_reduction_config(self) -> Dict[str, Any]:
        """Get reduction loop limits"""
        return {
            "max_rounds": self.max_reduction_rounds,
            "max_tower_steps": self.max_tower_steps,
        }

    def get_logging_config(self) -> Dict[str, Any]:
        """Get logging configuration"""
        return {
            "level": self.log_level,
            "file": self.log_file,
        }

    def get_web_config(self) -> Dict[str, Any]:
        return {"host": self.web_host, "port": self.web_port}

    def validate_configuration(self) -> bool:
        """Validate that the configuration is usable"""
        if self.window < 0:
            return False
        caps = (self.max_search_unknowns, self.max_reduction_rounds,
                self.max_tower_steps, self.max_spanning_trees, self.batch_workers)
        if any(cap <= 0 for cap in caps):
            return False
        if self.log_level.upper() not in LOG_LEVELS:
            return False
        return True


def apply_environment(base: AnalysisConfig, environ: Mapping[str, str]) -> AnalysisConfig:
    """Copy of `base` with the ARTIN_* overrides applied; invalid values are logged and skipped"""
    updates: Dict[str, Any] = {}
    if environ.get("ARTIN_DEBUG", "false").lower() == "true":
        updates["log_level"] = "DEBUG"

    if environ.get("ARTIN_WINDOW"):
        updates["window"] = environ["ARTIN_WINDOW"]

    if environ.get("ARTIN_FREE_PRODUCT", "false").lower() == "true":
        updates["free_product_convention"] = True

    if environ.get("ARTIN_QUICK_MODE", "false").lower() == "true":
        updates["window"] = 4
        updates["max_search_unknowns"] = 300

    try:
        return AnalysisConfig.model_validate({**base.model_dump(), **updates})
    except ValidationError as e:
        rejected = {error["loc"][0] for error in e.errors()}
        for name in sorted(rejected):
            logger.warning(f"ignoring environment override {name}={updates.get(name)!r}")
        kept = {name: value for name, value in updates.items() if name not in rejected}
        return AnalysisConfig.model_validate({**base.model_dump(), **kept})


# Global configuration instance with environment-specific overrides
config = apply_environment(AnalysisConfig(), os.environ)
