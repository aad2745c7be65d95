from bayesloc.application.bootstrap import build_container, configure_logging

__all__ = [
  "build_container",
  "configure_logging"
]
