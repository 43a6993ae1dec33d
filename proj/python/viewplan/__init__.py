# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Active classification as sequential hypothesis testing.

Bayesian belief updates over discrete features, information-gain sensing
policies (greedy, cost-weighted, receding horizon, fixed order, random),
brute force optimal oracles for small instances, scenario generators, and
a deterministic episode simulator. Everything is implemented in C++ and
exposed through the `_core` extension module.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
