# Copyright 2026 The subvote Authors.
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
"""Secure majority-vote aggregation for sign-based federated learning."""

from subvote._core import (
    MvPolynomial,
    ProtocolError,
    cost_for,
    emit_table,
    is_prime,
    leakage_census,
    optimal,
    secure_round,
    simulate,
    smallest_prime_greater_than,
)

__all__ = [
    "MvPolynomial",
    "ProtocolError",
    "cost_for",
    "emit_table",
    "is_prime",
    "leakage_census",
    "optimal",
    "secure_round",
    "simulate",
    "smallest_prime_greater_than",
]
