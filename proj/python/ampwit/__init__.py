# Copyright 2026 The ampwit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Photon-number statistics, parametric amplification and witness tools."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__, analyze_json as _analyze_json


def analyze(signal, vacuum, resamples=1000, seed=0):
    """Analysis report for two count sequences, as a dict."""
    return _json.loads(_analyze_json(list(signal), list(vacuum), resamples, seed))
