import re

from dtncomm.errors import ConfigError

# month is taken as 30 days
DURATION_UNITS = {
    "s": 1,
    "m": 60,
    "min": 60,
    "h": 3600,
    "d": 86400,
    "w": 7 * 86400,
    "mo": 30 * 86400,
}
_DURATION_RE = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*([a-z]*)\s*$")


def parse_duration(value):
    """
    Parse a duration into integral seconds: 3600, "3600", "1h", "2d", "1w", "1mo"
    :param value: int, float or str
    :return: int number of seconds
    """
    if isinstance(value, bool):
        raise ConfigError(f'Invalid duration: "{value}"')
    if isinstance(value, (int, float)):
        seconds = value
    else:
        match = _DURATION_RE.match(str(value).lower())
        if match is None:
            raise ConfigError(
                f'Invalid duration: "{value}". Expected seconds or a number with one of the suffixes: '
                f"{', '.join(DURATION_UNITS)}"
            )
        number, unit = match.groups()
        if unit and unit not in DURATION_UNITS:
            raise ConfigError(f'Unknown duration unit "{unit}" in "{value}"')
        seconds = float(number) * DURATION_UNITS.get(unit or "s")
    if int(seconds) != seconds:
        raise ConfigError(f'Duration must be a whole number of seconds, got: "{value}"')
    return int(seconds)


def format_duration(seconds):
    """Shortest exact suffix representation, e.g. 86400 -> '1d', 90 -> '90s'"""
    for unit in ("mo", "w", "d", "h", "m"):
        size = DURATION_UNITS[unit]
        if seconds >= size and seconds % size == 0:
            return f"{seconds // size}{unit}"
    return f"{seconds}s"
