from .main import build_parser, main, run_algo

__all__ = ["build_parser", "main", "run_algo"]
