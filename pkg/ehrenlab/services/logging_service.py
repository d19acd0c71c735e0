import logging
import os
from typing import Optional

from ehrenlab.models.events import EventKind, EventRecord, LogLevel

logger = logging.getLogger(__name__)

EVENTS_FILE = 'events.jsonl'


class LoggingService:
    """
    Structured event log for runs, guards, experiments and covariance checks.

    Every event goes to the module logger; when bound to a directory it is
    also appended as one JSON line to events.jsonl.
    """

    def __init__(self, output_dir: Optional[str] = None):
        self.output_dir = output_dir
        self.events = []

    @property
    def path(self) -> Optional[str]:
        if not self.output_dir:
            return None
        return os.path.join(self.output_dir, EVENTS_FILE)

    def _emit(self, kind: EventKind, level: str, message: str, details: dict = None,
              source: str = None) -> EventRecord:
        try:
            log_level = LogLevel(level.lower())
        except ValueError:
            log_level = LogLevel.INFO

        event = EventRecord(kind=kind, level=log_level, message=message,
                            details=details or {}, source=source)
        self.events.append(event)

        logger.log(getattr(logging, log_level.name), f"[{kind.value}] {message}"
                   + (f" ({source})" if source else ''))

        if self.path:
            try:
                os.makedirs(self.output_dir, exist_ok=True)
                with open(self.path, 'a', encoding='utf-8') as sink:
                    sink.write(event.to_json() + '\n')
            except Exception as e:
                # Fallback to the plain logger if the event file fails
                logger.error(f"Event logging error: {str(e)}")
                logger.error(f"Event: {log_level.value.upper()} - {message}")
        return event

    def log_run(self, level: str, message: str, details: dict = None, scenario: str = None):
        """Log run lifecycle events"""
        return self._emit(EventKind.RUN, level, message, details, scenario)

    def log_guard(self, level: str, message: str, details: dict = None, scenario: str = None,
                  step: int = None, diagnostic: str = None):
        """Log guard trips (clearance, blow-up, stability)"""
        details = dict(details or {})
        if step is not None:
            details['step'] = step
        if diagnostic is not None:
            details['diagnostic'] = diagnostic
        return self._emit(EventKind.GUARD, level, message, details, scenario)

    def log_experiment(self, level: str, message: str, details: dict = None, preset: str = None,
                       passed: bool = None, runtime_seconds: float = None):
        """Log experiment verdicts"""
        details = dict(details or {})
        if passed is not None:
            details['passed'] = passed
        if runtime_seconds is not None:
            details['runtime_seconds'] = round(runtime_seconds, 3)
        return self._emit(EventKind.EXPERIMENT, level, message, details, preset)

    def log_covariance(self, level: str, message: str, details: dict = None, model: str = None,
                       quadratic_phase: str = None, error: float = None):
        """Log boost-covariance measurements"""
        details = dict(details or {})
        if quadratic_phase is not None:
            details['quadratic_phase'] = quadratic_phase
        if error is not None:
            details['covariance_error'] = error
        return self._emit(EventKind.COVARIANCE, level, message, details, model)
