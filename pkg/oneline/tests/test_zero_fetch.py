import gzip
import hashlib
import tempfile
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from django.test import SimpleTestCase

from oneline.exceptions import ChecksumError, NetworkError, PayloadError
from oneline.zero_data import load_zeros
from oneline.zero_fetch import ZeroFetcher, fetch_zeros, normalize_payload

FIXTURE = Path(__file__).parent / 'fixtures' / 'zeros_first30.txt'


def indexed_payload():
    ordinates = [line for line in FIXTURE.read_text().splitlines() if not line.startswith('#')]
    lines = ['# index ordinate'] + [f'{n} {value}' for n, value in enumerate(ordinates, start=1)]
    return ('\n'.join(lines) + '\n').encode()


PAYLOADS = {
    '/zeros.txt': indexed_payload(),
    '/zeros.gz': gzip.compress(indexed_payload()),
    '/garbage.txt': b'<html>not found</html>\n',
}


class PayloadHandler(BaseHTTPRequestHandler):
    def do_GET(self):
        body = PAYLOADS.get(self.path)
        if body is None:
            self.send_error(404)
            return
        self.send_response(200)
        self.send_header('Content-Length', str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, format, *args):
        pass


class FetchTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.server = ThreadingHTTPServer(('127.0.0.1', 0), PayloadHandler)
        cls.thread = threading.Thread(target=cls.server.serve_forever, daemon=True)
        cls.thread.start()
        cls.base = f'http://127.0.0.1:{cls.server.server_address[1]}'

    @classmethod
    def tearDownClass(cls):
        cls.server.shutdown()
        cls.server.server_close()
        super().tearDownClass()

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.out = Path(self.tmp.name) / 'zeros.txt'

    def test_plain_list(self):
        url = f'{self.base}/zeros.txt'
        fetch_zeros(url, self.out, checksum=hashlib.sha256(PAYLOADS['/zeros.txt']).hexdigest())
        table = load_zeros(self.out)
        self.assertEqual(len(table), 30)
        self.assertEqual(table.source, url)
        self.assertIn('# fetched:', self.out.read_text())

    def test_gzip_list(self):
        fetch_zeros(f'{self.base}/zeros.gz', self.out)
        self.assertEqual(load_zeros(self.out).texts[0], '14.134725142')

    def test_checksum_mismatch_leaves_nothing(self):
        with self.assertRaises(ChecksumError):
            fetch_zeros(f'{self.base}/zeros.txt', self.out, checksum='0' * 64)
        self.assertFalse(self.out.exists())

    def test_http_error(self):
        with self.assertRaises(NetworkError) as ctx:
            fetch_zeros(f'{self.base}/missing.txt', self.out)
        self.assertEqual(ctx.exception.status, 404)
        self.assertFalse(self.out.exists())

    def test_not_a_zero_list(self):
        with self.assertRaises(PayloadError):
            fetch_zeros(f'{self.base}/garbage.txt', self.out)
        self.assertFalse(self.out.exists())

    def test_connection_refused(self):
        with self.assertRaises(NetworkError) as ctx:
            ZeroFetcher(timeout=5).download('http://127.0.0.1:9/zeros.txt')
        self.assertIsNone(ctx.exception.status)

    def test_corrupt_gzip(self):
        with self.assertRaises(PayloadError):
            normalize_payload(b'\x1f\x8b' + b'\x00' * 20, 'memory')
