import os
import shutil
import sys
from tempfile import mkdtemp, mkstemp

try:
    from simplejson import dumps as json_dumps
except ImportError:
    from json import dumps as json_dumps

from ManifoldLab import parseConfig, runExperiment

def run(config_content):
    '''
    Helper method to write config_content to disk if it is a string and
    run it; returns (config, manifest)
    '''
    is_string = isinstance(config_content, (str, bytes))

    if is_string:
        absolute_file_name = create_temp_file(config_content)
        config = parseConfig(absolute_file_name)

    else:
        config = parseConfig(config_content)

    manifest = runExperiment(config)

    if is_string:
        os.remove(absolute_file_name)

    return config, manifest

def create_temp_file(buffer, dir=None, suffix='.cfg'):
    '''
    Helper method to create temp file on disk. Caller is responsible
    for deleting file once done
    '''
    fd, absolute_file_name = mkstemp(text=True, dir=dir, suffix=suffix)
    file = os.fdopen(fd, 'wb' if (type(buffer) is bytes) else 'w')
    file.write(buffer)
    file.close()
    return absolute_file_name

def create_config_file(config_dict, dir=None):
    '''
    Helper method to write a configuration dictionary as a JSON file
    '''
    return create_temp_file(json_dumps(config_dict, indent=2), dir)

class TempDirMixin:
    '''
    Gives each test a scratch directory in self.tmpdir, removed afterwards
    '''
    def setUp(self):
        self.tmpdir = mkdtemp(prefix='manifoldlab-')
        self.syspath = list(sys.path)

    def tearDown(self):
        shutil.rmtree(self.tmpdir)
        sys.path[:] = self.syspath
