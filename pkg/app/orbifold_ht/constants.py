import os

TOOL_VERSION = "1.0.0"
REPORT_SCHEMA_VERSION = "1"

LOG_LEVEL = os.environ.get("ORBIFOLD_HT_LOG_LEVEL", "WARNING")

DEFAULT_CLOSURE_BOUND = 1024
DEFAULT_OMEGA_SIGN = -1

ORDERED = "ordered"
SYMMETRIC = "symmetric"
SIGN_PROFILES = (ORDERED, SYMMETRIC)
DEFAULT_SIGN_PROFILE = SYMMETRIC

# bigrading conventions
NEW = "new"
PARENTHESIZED = "parenthesized"

IDENTITY_LABEL = "e"

MAX_WITNESSES = 20

PASS = "pass"
FAIL = "fail"

TABLE = "table"
STRUCTURED = "structured"

EXHAUSTIVE = "exhaustive"
EXHAUSTIVE_DEG2 = "exhaustive-deg2"
SAMPLED = "sampled"
DEFAULT_SAMPLE_COUNT = 200
