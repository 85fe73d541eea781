import pytest

from featsel.errors import ReportError
from featsel.util import (ensure_dir, file_digest, format_float, format_mce, parse_grid,
    parse_index_set, write_rows, write_with)

def test_format_mce():
    assert format_mce(4 / 56) == '0.0714'
    assert format_mce(0) == '0.0000'

def test_format_float_round_trips():
    value = 0.1 + 0.2
    assert float(format_float(value)) == value

class TestFiles:
    def test_ensure_dir(self, tmp_path):
        path = str(tmp_path / 'a' / 'b')
        assert ensure_dir(path) == path
        assert ensure_dir(path) == path
        assert (tmp_path / 'a' / 'b').is_dir()

    def test_ensure_dir_below_a_file(self, tmp_path):
        blocker = tmp_path / 'file'
        blocker.write_text('x')
        with pytest.raises(ReportError) as excinfo:
            ensure_dir(str(blocker / 'sub'))
        assert str(blocker / 'sub') in str(excinfo.value)

    def test_write_rows(self, tmp_path):
        path = str(tmp_path / 'rows.csv')
        write_rows(path, [('k', 'v'), ('a,b', '1')])
        assert (tmp_path / 'rows.csv').read_text() == 'k,v\n"a,b",1\n'

    def test_write_rows_failure(self, tmp_path):
        with pytest.raises(ReportError):
            write_rows(str(tmp_path / 'missing' / 'rows.csv'), [('k', )])

    def test_write_with(self, tmp_path):
        path = str(tmp_path / 'out.txt')
        assert write_with(lambda p: open(p, 'w').close(), path) == path
        assert (tmp_path / 'out.txt').exists()

    def test_write_with_failure(self, tmp_path):
        def refuse(path):
            raise PermissionError(13, 'Permission denied', path)
        with pytest.raises(ReportError) as excinfo:
            write_with(refuse, str(tmp_path / 'out.txt'))
        assert 'Permission denied' in str(excinfo.value)
        assert str(tmp_path / 'out.txt') in str(excinfo.value)

    def test_file_digest(self, tmp_path):
        path = tmp_path / 'empty'
        path.write_bytes(b'')
        assert file_digest(str(path)) == \
            'e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855'
        with pytest.raises(ReportError):
            file_digest(str(tmp_path / 'missing'))


class TestParsing:
    def test_grid_range(self):
        assert parse_grid('5:70:5') == list(range(5, 71, 5))
        assert parse_grid(' 1:3:1 ') == [1, 2, 3]

    def test_grid_list(self):
        assert parse_grid('3,8,20') == [3, 8, 20]

    @pytest.mark.parametrize('token', ['5:70', '5:70:0', 'a:b:c', 'x'])
    def test_bad_grid(self, token):
        with pytest.raises(ValueError):
            parse_grid(token)

    def test_index_set(self):
        assert parse_index_set('4') == [0, 1, 2, 3]
        assert parse_index_set('9,3,3') == [3, 9]
