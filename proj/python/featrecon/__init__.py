# Copyright 2026 The featrecon Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Feature-space reconstruction with cooperating Q-learning agents."""

from ._featrecon import (
    Error,
    FeatureColumn,
    FeatureTable,
    apply,
    evaluate_cv,
    h_statistic,
    load_csv,
    mutual_information,
    operators,
    read_csv_text,
    reconstruct,
    rep_featureset,
    synthetic_csv,
    synthetic_table,
)

__all__ = [
    "Error",
    "FeatureColumn",
    "FeatureTable",
    "apply",
    "evaluate_cv",
    "h_statistic",
    "load_csv",
    "mutual_information",
    "operators",
    "read_csv_text",
    "reconstruct",
    "rep_featureset",
    "synthetic_csv",
    "synthetic_table",
]
