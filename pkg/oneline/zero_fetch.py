"""
Download of published zero-ordinate lists.

A payload is plain text (optionally gzip-compressed) with one ordinate per
line; an index column in front of the ordinate is dropped. The result is
written in the commented zero-file format, and nothing is left at the
destination when any step fails.
"""

import gzip
import hashlib
import logging

import requests
from django.utils import timezone

from .conf import setting
from .exceptions import ChecksumError, NetworkError, PayloadError, ZeroFormatError
from .zero_data import parse_zero_lines, write_zero_file

logger = logging.getLogger(__name__)

GZIP_MAGIC = b'\x1f\x8b'


class ZeroFetcher:
    """HTTP(S) client for zero lists"""

    def __init__(self, timeout=None):
        self.timeout = timeout or setting('ONELINE_FETCH_TIMEOUT')
        self.session = requests.Session()
        self.session.headers.update({
            'User-Agent': 'zetaline-zero-fetch/1.0',
            'Accept': 'text/plain, application/gzip, */*',
        })

    def download(self, url):
        """Raw payload bytes of url"""
        logger.info("Fetching zeros from %s", url)
        try:
            response = self.session.get(url, timeout=self.timeout)
        except requests.exceptions.RequestException as exc:
            raise NetworkError(f"request to {url} failed: {exc}") from exc
        if response.status_code != 200:
            raise NetworkError(f"{url} answered HTTP {response.status_code}", status=response.status_code)
        return response.content


def verify_checksum(payload, expected):
    digest = hashlib.sha256(payload).hexdigest()
    if digest != expected.strip().lower():
        raise ChecksumError(f"sha256 {digest} does not match the expected {expected}")
    return digest


def normalize_payload(payload, source):
    """Ordinate texts and the parsed table of a downloaded payload"""
    if payload[:2] == GZIP_MAGIC:
        try:
            payload = gzip.decompress(payload)
        except OSError as exc:
            raise PayloadError(f"corrupt gzip payload: {exc}") from exc
    try:
        text = payload.decode('utf-8')
    except UnicodeDecodeError as exc:
        raise PayloadError("payload is not UTF-8 text") from exc
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        lines.append(line.split()[-1])
    try:
        table = parse_zero_lines(lines, format='plain', source=source)
    except ZeroFormatError as exc:
        raise PayloadError(f"payload is not a zero list: {exc}") from exc
    return table


def fetch_zeros(url, out, checksum=None, fetcher=None):
    """Download url, check its SHA-256 when given and write a commented zero file to out"""
    fetcher = fetcher or ZeroFetcher()
    payload = fetcher.download(url)
    if checksum:
        verify_checksum(payload, checksum)
    table = normalize_payload(payload, url)
    path = write_zero_file(
        out,
        table.texts,
        source=url,
        complete_to=table.texts[-1],
        accuracy=setting('ONELINE_ZERO_ACCURACY'),
        extra={'fetched': timezone.now().strftime('%Y-%m-%dT%H:%M:%SZ')},
    )
    logger.info("Saved %d ordinates to %s", len(table), path)
    return path
