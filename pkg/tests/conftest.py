import pytest


@pytest.fixture
def announce(request):
    """Write a line to the terminal even when output is captured."""
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def write(line: str):
        if reporter is not None:
            reporter.write_line(line)
        else:
            print(line)

    return write
