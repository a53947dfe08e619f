"""
Scan reports: CSV, a JSON mirror and plot-ready text blocks.

Midpoints and radii are written as the shortest decimals that read back to
the same binary values, so parse_csv returns the records that were written.
"""

import json
import logging
from pathlib import Path

import pandas as pd

from .balls import DEFAULT_PREC, BallReal, read_decimal, shortest_decimal
from .exceptions import ArgumentError
from .scan import VerificationRecord

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    't', 'quantity', 'computed_mid', 'computed_rad', 'bound_mid', 'bound_rad', 'margin_mid', 'margin_rad', 'verdict',
]
BALL_FIELDS = ('computed', 'bound', 'margin')
FORMATS = ('csv', 'json', 'plot')


def _ball_texts(ball):
    if ball is None:
        return '', ''
    return shortest_decimal(ball.mid, ball.prec), shortest_decimal(ball.rad, ball.prec)


def records_frame(records):
    rows = []
    for record in records:
        row = {'t': record.t, 'quantity': record.quantity}
        for name in BALL_FIELDS:
            row[f'{name}_mid'], row[f'{name}_rad'] = _ball_texts(getattr(record, name))
        row['verdict'] = record.verdict
        rows.append(row)
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def _json_payload(records):
    out = []
    for record in records:
        item = {'t': record.t, 'quantity': record.quantity}
        for name in BALL_FIELDS:
            mid, rad = _ball_texts(getattr(record, name))
            item[name] = {'mid': mid, 'rad': rad} if mid else None
        item['verdict'] = record.verdict
        item['reason'] = record.reason
        out.append(item)
    return out


def _plot_text(records):
    """
    One block per quantity, blank-line separated: t computed_mid bound_mid.
    Each block opens with a `# quantity:` comment naming its columns.
    """
    blocks = {}
    for record in records:
        blocks.setdefault(record.quantity, [])
        if record.computed is None or record.bound is None:
            continue
        blocks[record.quantity].append(
            f"{record.t} {_ball_texts(record.computed)[0]} {_ball_texts(record.bound)[0]}"
        )
    parts = [f"# {quantity}: t computed_mid bound_mid\n" + '\n'.join(lines) for quantity, lines in blocks.items()]
    return '\n\n'.join(parts) + '\n'


def emit_report(records, path, format='csv'):
    """Write records to path in the given format"""
    if not records:
        raise ArgumentError("cannot write a report without records")
    if format not in FORMATS:
        raise ArgumentError(f"unknown report format {format!r}; choose from {', '.join(FORMATS)}")
    path = Path(path)
    if format == 'csv':
        records_frame(records).to_csv(path, index=False, lineterminator='\n')
    elif format == 'json':
        path.write_text(json.dumps(_json_payload(records), indent=2) + '\n', encoding='utf-8')
    else:
        path.write_text(_plot_text(records), encoding='utf-8')
    logger.info("Wrote %d records to %s (%s)", len(records), path, format)
    return path


def _read_ball(mid, rad, prec):
    if not mid:
        return None
    return BallReal(read_decimal(mid, prec), read_decimal(rad, prec), prec)


def parse_csv(path, prec=DEFAULT_PREC):
    """Records from a CSV report"""
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    missing = [column for column in CSV_COLUMNS if column not in frame.columns]
    if missing:
        raise ArgumentError(f"{path}: missing report columns {', '.join(missing)}")
    records = []
    for row in frame.itertuples(index=False):
        balls = {name: _read_ball(getattr(row, f'{name}_mid'), getattr(row, f'{name}_rad'), prec)
                 for name in BALL_FIELDS}
        records.append(VerificationRecord(row.t, row.quantity, balls['computed'], balls['bound'],
                                          balls['margin'], row.verdict))
    return records
