# Copyright 2026 The Evacuation Planner Authors.
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


# Solves an MPS file written by `evacplan export` or `solve --mps` with HiGHS
# and prints the optimal objective. Needs `pip install highspy`.
#
#   python3 tools/mps_crosscheck.py model.mps

import sys

import highspy


def main():
    if len(sys.argv) != 2:
        sys.exit("usage: mps_crosscheck.py model.mps")
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    if h.readModel(sys.argv[1]) != highspy.HighsStatus.kOk:
        sys.exit(f"cannot read {sys.argv[1]}")
    h.run()
    status = h.modelStatusToString(h.getModelStatus())
    print(f"{status} {h.getInfo().objective_function_value:.10g}")


if __name__ == "__main__":
    main()
