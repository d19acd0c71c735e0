from datetime import datetime, timezone
from dataclasses import dataclass, field
import enum
import json


class LogLevel(enum.Enum):
    DEBUG = 'debug'
    INFO = 'info'
    WARNING = 'warning'
    ERROR = 'error'
    CRITICAL = 'critical'


class EventKind(enum.Enum):
    RUN = 'run'
    GUARD = 'guard'
    EXPERIMENT = 'experiment'
    COVARIANCE = 'covariance'


@dataclass
class EventRecord:
    kind: EventKind
    level: LogLevel
    message: str
    details: dict = field(default_factory=dict)
    source: str = None  # scenario or preset that generated the event
    timestamp: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    def to_dict(self):
        return {
            'timestamp': self.timestamp.isoformat(),
            'kind': self.kind.value,
            'level': self.level.value,
            'message': self.message,
            'source': self.source,
            'details': self.details,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, default=str)
