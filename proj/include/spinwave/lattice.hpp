// Copyright 2026 The spinwave Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINWAVE_LATTICE_HPP
#define SPINWAVE_LATTICE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinwave/error.hpp"

namespace spinwave {

/// Largest vertex count representable by a single-word subset mask.
inline constexpr int kMaxVertices = 64;

enum class Boundary { open, periodic };

inline std::string_view to_string(Boundary b) {
  return b == Boundary::open ? "open" : "periodic";
}

inline Boundary parse_boundary(std::string_view s) {
  if (s == "open") return Boundary::open;
  if (s == "periodic") return Boundary::periodic;
  throw ValidationError("boundary: expected \"open\" or \"periodic\", got \"" +
                        std::string(s) + "\"");
}

struct Edge {
  int a;
  int b;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Rectangular box of arbitrary dimension with nearest-neighbour bonds.
/// Vertices are numbered row-major over dims (last axis fastest).
class Lattice {
 public:
  const std::vector<int>& dims() const { return dims_; }
  Boundary boundary() const { return boundary_; }
  int num_vertices() const { return v_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::string label() const {
    std::string s;
    for (std::size_t d = 0; d < dims_.size(); ++d) {
      if (d) s += 'x';
      s += std::to_string(dims_[d]);
    }
    return s + (boundary_ == Boundary::open ? "" : "p");
  }

  friend Lattice build_rectangular(std::vector<int> dims, Boundary boundary);

 private:
  std::vector<int> dims_;
  Boundary boundary_ = Boundary::open;
  int v_ = 0;
  std::vector<Edge> edges_;
};

/// Edges are emitted vertex by vertex, then axis by axis, always as
/// (vertex, forward neighbour); periodic wrap bonds are stored with a < b.
inline Lattice build_rectangular(std::vector<int> dims, Boundary boundary) {
  if (dims.empty()) throw ValidationError("dims: must list at least one side length");
  std::int64_t v = 1;
  for (int d : dims) {
    if (d < 1) throw ValidationError("dims: side lengths must be >= 1, got " + std::to_string(d));
    if (boundary == Boundary::periodic && d < 3)
      throw ValidationError("dims: periodic boundary needs every side length >= 3, got " +
                            std::to_string(d));
    v *= d;
    if (v > kMaxVertices)
      throw CapacityError("dims: vertex count exceeds the " + std::to_string(kMaxVertices) +
                          "-site limit of the subset index type");
  }

  Lattice lat;
  lat.dims_ = std::move(dims);
  lat.boundary_ = boundary;
  lat.v_ = static_cast<int>(v);

  const std::size_t nd = lat.dims_.size();
  std::vector<int> stride(nd, 1);
  for (std::size_t d = nd - 1; d-- > 0;) stride[d] = stride[d + 1] * lat.dims_[d + 1];

  std::vector<int> coord(nd, 0);
  for (int site = 0; site < lat.v_; ++site) {
    for (std::size_t d = 0; d < nd; ++d) coord[d] = (site / stride[d]) % lat.dims_[d];
    for (std::size_t d = 0; d < nd; ++d) {
      if (coord[d] + 1 < lat.dims_[d]) {
        lat.edges_.push_back({site, site + stride[d]});
      } else if (boundary == Boundary::periodic) {
        int wrapped = site - coord[d] * stride[d];
        lat.edges_.push_back({std::min(site, wrapped), std::max(site, wrapped)});
      }
    }
  }
  return lat;
}

}  // namespace spinwave

#endif  // SPINWAVE_LATTICE_HPP
