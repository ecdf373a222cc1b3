// SPDX-License-Identifier: Apache-2.0
//
// saos-sim: simulator for sparse arrays of RIS sub-surfaces
// Copyright (C) 2026 saos-sim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SAOS_GEOMETRY_HPP
#define SAOS_GEOMETRY_HPP

#include <Eigen/Dense>

#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace saos
{
    // Raised when two points that must differ coincide (zero distance, undefined direction)
    class GeometryError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    using Direction3 = Eigen::Vector3d; // Unit direction in the global frame

    // Point in the global Cartesian frame, meters
    struct Position3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;

        Eigen::Vector3d vec() const { return {x, y, z}; }
        static Position3 from(const Eigen::Vector3d &v) { return {v.x(), v.y(), v.z()}; }
        bool is_finite() const;

        friend bool operator==(const Position3 &, const Position3 &) = default;
    };

    Eigen::Vector3d operator-(const Position3 &a, const Position3 &b);
    Position3 operator+(const Position3 &p, const Eigen::Vector3d &offset);
    double distance(const Position3 &a, const Position3 &b);

    // Uniform planar array. Element k (0-based) sits in grid row k / n_h and column k % n_h,
    // i.e. vertical-major ordering matching a_v(Theta) (x) a_h(Phi).
    struct PlanarArraySpec
    {
        int n_v = 1;                                    // Elements along the vertical axis
        int n_h = 1;                                    // Elements along the horizontal axis
        double spacing_v = 0.0;                         // Vertical element pitch [m]
        double spacing_h = 0.0;                         // Horizontal element pitch [m]
        Direction3 vertical_axis = Direction3::UnitZ(); // Global direction of increasing row index
        Direction3 horizontal_axis = Direction3::UnitY(); // Global direction of increasing column index

        int size() const { return n_v * n_h; }
        void validate() const; // Throws std::invalid_argument

        // Positions of all elements of an array whose grid is centered on `center`
        std::vector<Position3> element_positions(const Position3 &center) const;
    };

    // Sparse array of sub-surfaces: a tiles_v x tiles_h grid of identical RIS tiles.
    // tile_gap_* is the center-to-center pitch of adjacent tiles.
    struct SaosLayout
    {
        int tiles_v = 1;
        int tiles_h = 1;
        double tile_gap_v = 0.0; // [m]
        double tile_gap_h = 0.0; // [m]
        PlanarArraySpec tile_spec;
        Position3 center{0.0, 0.0, 0.0};
        Direction3 panel_normal = Direction3::UnitX();

        int tile_count() const { return tiles_v * tiles_h; }
        int elements_per_tile() const { return tile_spec.size(); }
        void validate() const; // Throws std::invalid_argument

        // Tiles are numbered 0..tile_count()-1, vertical-major
        Position3 tile_center(int tile) const;
    };

    // Sector-shaped visible region; omnidirectional in elevation
    struct VisibleRegion
    {
        Position3 apex;
        Direction3 axis = Direction3::UnitX();
        double half_angle_azimuth = std::numbers::pi / 4.0; // [rad], in (0, pi]
    };

    // Elevation from +z, azimuth in the horizontal plane from +x
    struct DirectionAngles
    {
        double elevation = 0.0; // theta in [0, pi]
        double azimuth = 0.0;   // phi in (-pi, pi]

        Direction3 unit_vector() const;
    };

    // Per-axis phase progression of a plane wave across a uniform array [rad]
    struct SpatialFrequencies
    {
        double vertical = 0.0;   // Theta
        double horizontal = 0.0; // Phi
    };

    std::vector<Position3> element_positions(const SaosLayout &layout, int tile);

    DirectionAngles direction_angles(const Position3 &from, const Position3 &to);

    // Theta = (2 pi spacing_v / lambda) cos(theta), Phi = (2 pi spacing_h / lambda) sin(theta) sin(phi)
    SpatialFrequencies spatial_frequencies(const DirectionAngles &angles, double spacing_v, double spacing_h,
                                           double wavelength);

    // Same as above for an arbitrary array orientation: projections of `direction` onto the array axes
    SpatialFrequencies spatial_frequencies(const Direction3 &direction, const PlanarArraySpec &array,
                                           double wavelength);

    // Closed sector test on the horizontal projection; the point's height is ignored
    bool in_visible_region(const VisibleRegion &vr, const Position3 &point);

    VisibleRegion tile_visible_region(const SaosLayout &layout, int tile, double half_angle_azimuth);

    double element_distance(const Position3 &ms, const SaosLayout &layout, int tile, int element);
}

#endif
