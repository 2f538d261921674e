"""Action database and audit log.

The action table is a leveled authorization hierarchy:

* level 0 -- (from, to) bypass: any request with a matching global level-9
  record is allowed without further checks
* level 1 -- (from, to, request) directly allowed
* level 2 -- (from, to, secret-hex) gated behind secret recovery
* level 9 -- globally valid requests, from/to are the wildcard name "0"

Two store backends share one interface: an in-memory dict store for tests
and a sqlite-backed relational store with the `action` / `audit_recovery`
schema.  Appended actions are serialized into the action column as
"A1;A1a;A1b".
"""
import sqlite3
import threading
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

WILDCARD = "0"
VALID_LEVELS = (0, 1, 2, 9)


class ActionTableError(ValueError):
    """Malformed action table text or invalid record."""


@dataclass(frozen=True)
class ActionRecord:
    from_node: str
    to_node: str
    level: int
    request_key: str
    action: str
    appended_actions: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.level not in VALID_LEVELS:
            raise ActionTableError(f"invalid level {self.level}")
        if self.level == 9 and (self.from_node != WILDCARD or self.to_node != WILDCARD):
            raise ActionTableError("level-9 records must use wildcard from/to")

    @property
    def key(self) -> Tuple[str, str, int, str]:
        return (self.from_node, self.to_node, self.level, self.request_key)

    @property
    def action_column(self) -> str:
        return ";".join((self.action, *self.appended_actions)) if self.action else ""

    @staticmethod
    def split_action_column(text: str) -> Tuple[str, Tuple[str, ...]]:
        parts = [p.strip() for p in text.split(";") if p.strip()]
        if not parts:
            return "", ()
        return parts[0], tuple(parts[1:])


class Verdict(str, Enum):
    ALLOWED_LEVEL0 = "allowed-level0"
    ALLOWED_LEVEL1 = "allowed-level1"
    NEEDS_LEVEL2_RECOVERY = "needs-level2-recovery"
    DENIED = "denied"


@dataclass
class AuthorizationOutcome:
    verdict: Verdict
    action: Optional[str] = None
    appended: Tuple[str, ...] = ()


@dataclass
class AuditRecord:
    reference_number: str
    request: str
    batch_id: str
    is_success: bool
    context_nodes: str
    created_at: int
    id: Optional[int] = None


class ActionStore:
    """In-memory action table plus append-only audit log."""

    def __init__(self):
        self._records: Dict[Tuple[str, str, int, str], ActionRecord] = {}
        self._audits: List[AuditRecord] = []
        self._lock = threading.Lock()

    # -- action table ------------------------------------------------------

    def upsert_actions(self, records: Sequence[ActionRecord]) -> int:
        with self._lock:
            for rec in records:
                self._records[rec.key] = rec
        return len(records)

    def delete_action(self, key: Tuple[str, str, int, str]) -> bool:
        with self._lock:
            return self._records.pop(key, None) is not None

    def all_actions(self) -> List[ActionRecord]:
        return sorted(self._records.values(), key=lambda r: r.key)

    def clear_actions(self):
        with self._lock:
            self._records.clear()

    def level_records(self, from_node: str, to_node: str, level: int) -> List[ActionRecord]:
        return [
            r
            for r in self.all_actions()
            if r.level == level and r.from_node == from_node and r.to_node == to_node
        ]

    def authorize_request(self, from_node: str, to_node: str, request: str) -> AuthorizationOutcome:
        """Run the level cascade for one request."""
        if self.level_records(from_node, to_node, 0):
            for rec in self.all_actions():
                if rec.level == 9 and rec.request_key == request:
                    return AuthorizationOutcome(
                        Verdict.ALLOWED_LEVEL0, rec.action, rec.appended_actions
                    )
            return AuthorizationOutcome(Verdict.DENIED)
        for rec in self.level_records(from_node, to_node, 1):
            if rec.request_key == request:
                return AuthorizationOutcome(
                    Verdict.ALLOWED_LEVEL1, rec.action, rec.appended_actions
                )
        if self.level_records(from_node, to_node, 2):
            return AuthorizationOutcome(Verdict.NEEDS_LEVEL2_RECOVERY)
        return AuthorizationOutcome(Verdict.DENIED)

    def lookup_by_secret(self, from_node: str, to_node: str, secret_hex: str):
        rec = self._records.get((from_node, to_node, 2, secret_hex))
        if rec is None:
            return None
        return rec.action, rec.appended_actions

    # -- audit log ---------------------------------------------------------

    def record_audit(self, entry: AuditRecord) -> int:
        with self._lock:
            entry = replace(entry, id=len(self._audits) + 1)
            self._audits.append(entry)
            return entry.id

    def list_audit(
        self,
        reference_number: Optional[str] = None,
        batch_id: Optional[str] = None,
    ) -> List[AuditRecord]:
        rows = self._audits
        if reference_number is not None:
            rows = [r for r in rows if r.reference_number == reference_number]
        if batch_id is not None:
            rows = [r for r in rows if r.batch_id == batch_id]
        return sorted(rows, key=lambda r: (r.created_at, r.id))


_SCHEMA = """
CREATE TABLE IF NOT EXISTS action (
    from_node TEXT NOT NULL,
    to_node   TEXT NOT NULL,
    level     INTEGER NOT NULL,
    request   TEXT NOT NULL,
    action    TEXT NOT NULL,
    PRIMARY KEY (from_node, to_node, level, request)
);
CREATE TABLE IF NOT EXISTS audit_recovery (
    id               INTEGER PRIMARY KEY AUTOINCREMENT,
    reference_number TEXT,
    request          TEXT,
    batch_id         TEXT,
    is_success       BOOLEAN NOT NULL,
    context_nodes    TEXT,
    created_at       TIMESTAMP
);
"""


class SqliteActionStore(ActionStore):
    """Relational backend with the `action` / `audit_recovery` schema."""

    def __init__(self, path: str = ":memory:"):
        super().__init__()
        self._db = sqlite3.connect(path, check_same_thread=False)
        self._db.executescript(_SCHEMA)
        self._load()

    def _load(self):
        self._records.clear()
        for row in self._db.execute("SELECT from_node, to_node, level, request, action FROM action"):
            action, appended = ActionRecord.split_action_column(row[4])
            rec = ActionRecord(row[0], row[1], row[2], row[3], action, appended)
            self._records[rec.key] = rec

    def upsert_actions(self, records: Sequence[ActionRecord]) -> int:
        with self._lock:
            with self._db:
                for rec in records:
                    self._db.execute(
                        "INSERT OR REPLACE INTO action VALUES (?, ?, ?, ?, ?)",
                        (rec.from_node, rec.to_node, rec.level, rec.request_key, rec.action_column),
                    )
                    self._records[rec.key] = rec
        return len(records)

    def delete_action(self, key) -> bool:
        with self._lock:
            with self._db:
                cur = self._db.execute(
                    "DELETE FROM action WHERE from_node=? AND to_node=? AND level=? AND request=?",
                    key,
                )
            return self._records.pop(key, None) is not None or cur.rowcount > 0

    def clear_actions(self):
        with self._lock:
            with self._db:
                self._db.execute("DELETE FROM action")
            self._records.clear()

    def record_audit(self, entry: AuditRecord) -> int:
        with self._lock:
            with self._db:
                cur = self._db.execute(
                    "INSERT INTO audit_recovery "
                    "(reference_number, request, batch_id, is_success, context_nodes, created_at) "
                    "VALUES (?, ?, ?, ?, ?, ?)",
                    (
                        entry.reference_number,
                        entry.request,
                        entry.batch_id,
                        entry.is_success,
                        entry.context_nodes,
                        entry.created_at,
                    ),
                )
            entry = replace(entry, id=cur.lastrowid)
            self._audits.append(entry)
            return entry.id


def parse_action_table(text: str) -> List[ActionRecord]:
    """Parse a pipe-delimited action table into records.

    The header row "| From | To | Level | Request | Action |" is required.
    Numeric From/To columns are mapped to canonical service names
    (controller-<i> / node-<i>); "0" stays the wildcard.  The Action cell may
    carry appended actions separated by commas or semicolons.  Parsing is
    atomic: any bad row raises and nothing is returned.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        return []
    header = [c.strip().lower() for c in lines[0].strip("|").split("|")]
    if header != ["from", "to", "level", "request", "action"]:
        raise ActionTableError(f"unexpected header: {lines[0]!r}")

    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.strip("|").split("|")]
        if len(cells) != 5:
            raise ActionTableError(f"line {lineno}: expected 5 columns, got {len(cells)}")
        raw_from, raw_to, raw_level, request, action_cell = cells
        try:
            level = int(raw_level)
        except ValueError:
            raise ActionTableError(f"line {lineno}: level {raw_level!r} is not an integer")
        parts = [p.strip() for p in action_cell.replace(",", ";").split(";") if p.strip()]
        action = parts[0] if parts else ""
        appended = tuple(parts[1:])
        try:
            records.append(
                ActionRecord(
                    from_node=_table_name(raw_from, "controller"),
                    to_node=_table_name(raw_to, "node"),
                    level=level,
                    request_key=request,
                    action=action,
                    appended_actions=appended,
                )
            )
        except ActionTableError as exc:
            raise ActionTableError(f"line {lineno}: {exc}") from exc
    return records


def _table_name(cell: str, role: str) -> str:
    if cell == WILDCARD:
        return WILDCARD
    if cell.isdigit():
        return f"{role}-{int(cell)}"
    return cell
