from .job import JobConfig
from .report import (
    CotangentReport,
    ExactValue,
    LerchSummary,
    MethodResult,
    OracleSummary,
    SecantReport,
    TableRow,
    VerifyReport,
)

__all__ = [
    'JobConfig',
    'ExactValue',
    'MethodResult',
    'OracleSummary',
    'SecantReport',
    'CotangentReport',
    'LerchSummary',
    'VerifyReport',
    'TableRow',
]
