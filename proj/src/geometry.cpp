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

#include "saos/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace saos
{
    namespace
    {
        constexpr double axis_tolerance = 1e-9;
        constexpr double vr_boundary_tolerance = 1e-12; // [rad], closed boundary

        void check_unit(const Direction3 &v, const char *name)
        {
            if (!v.allFinite() || std::abs(v.norm() - 1.0) > axis_tolerance)
                throw std::invalid_argument(std::string(name) + " must be a unit vector");
        }
    }

    bool Position3::is_finite() const
    {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }

    Eigen::Vector3d operator-(const Position3 &a, const Position3 &b)
    {
        return a.vec() - b.vec();
    }

    Position3 operator+(const Position3 &p, const Eigen::Vector3d &offset)
    {
        return Position3::from(p.vec() + offset);
    }

    double distance(const Position3 &a, const Position3 &b)
    {
        return (a - b).norm();
    }

    void PlanarArraySpec::validate() const
    {
        if (n_v < 1 || n_h < 1)
            throw std::invalid_argument("array element counts must be >= 1");
        if (!(spacing_v > 0.0) || !(spacing_h > 0.0))
            throw std::invalid_argument("array element spacings must be > 0");
        check_unit(vertical_axis, "vertical_axis");
        check_unit(horizontal_axis, "horizontal_axis");
        if (std::abs(vertical_axis.dot(horizontal_axis)) > axis_tolerance)
            throw std::invalid_argument("array axes must be orthogonal");
    }

    std::vector<Position3> PlanarArraySpec::element_positions(const Position3 &center) const
    {
        std::vector<Position3> out;
        out.reserve(static_cast<std::size_t>(size()));
        const double row_mid = 0.5 * (n_v - 1);
        const double col_mid = 0.5 * (n_h - 1);
        for (int row = 0; row < n_v; ++row)
            for (int col = 0; col < n_h; ++col)
                out.push_back(center + ((row - row_mid) * spacing_v * vertical_axis +
                                        (col - col_mid) * spacing_h * horizontal_axis));
        return out;
    }

    void SaosLayout::validate() const
    {
        if (tiles_v < 1 || tiles_h < 1)
            throw std::invalid_argument("tile counts must be >= 1");
        if (!(tile_gap_v >= 0.0) || !(tile_gap_h >= 0.0))
            throw std::invalid_argument("tile gaps must be >= 0");
        if (!center.is_finite())
            throw std::invalid_argument("layout center must be finite");
        tile_spec.validate();
        check_unit(panel_normal, "panel_normal");
        if (std::abs(panel_normal.dot(tile_spec.vertical_axis)) > axis_tolerance ||
            std::abs(panel_normal.dot(tile_spec.horizontal_axis)) > axis_tolerance)
            throw std::invalid_argument("panel_normal must be orthogonal to the tile axes");
    }

    Position3 SaosLayout::tile_center(int tile) const
    {
        if (tile < 0 || tile >= tile_count())
            throw std::out_of_range("tile index " + std::to_string(tile) + " out of range [0, " +
                                    std::to_string(tile_count()) + ")");
        const int row = tile / tiles_h;
        const int col = tile % tiles_h;
        const double dv = (row - 0.5 * (tiles_v - 1)) * tile_gap_v;
        const double dh = (col - 0.5 * (tiles_h - 1)) * tile_gap_h;
        return center + (dv * tile_spec.vertical_axis + dh * tile_spec.horizontal_axis);
    }

    Direction3 DirectionAngles::unit_vector() const
    {
        return {std::sin(elevation) * std::cos(azimuth), std::sin(elevation) * std::sin(azimuth),
                std::cos(elevation)};
    }

    std::vector<Position3> element_positions(const SaosLayout &layout, int tile)
    {
        return layout.tile_spec.element_positions(layout.tile_center(tile));
    }

    DirectionAngles direction_angles(const Position3 &from, const Position3 &to)
    {
        const Eigen::Vector3d d = to - from;
        const double len = d.norm();
        if (!(len > 0.0))
            throw GeometryError("direction between coincident points is undefined");
        const Eigen::Vector3d u = d / len;
        DirectionAngles a;
        a.elevation = std::acos(std::clamp(u.z(), -1.0, 1.0));
        a.azimuth = std::atan2(u.y(), u.x());
        if (a.azimuth == -std::numbers::pi)
            a.azimuth = std::numbers::pi;
        return a;
    }

    SpatialFrequencies spatial_frequencies(const DirectionAngles &angles, double spacing_v, double spacing_h,
                                           double wavelength)
    {
        if (!(wavelength > 0.0) || !(spacing_v > 0.0) || !(spacing_h > 0.0))
            throw std::invalid_argument("wavelength and spacings must be > 0");
        const double k = 2.0 * std::numbers::pi / wavelength;
        return {k * spacing_v * std::cos(angles.elevation),
                k * spacing_h * std::sin(angles.elevation) * std::sin(angles.azimuth)};
    }

    SpatialFrequencies spatial_frequencies(const Direction3 &direction, const PlanarArraySpec &array,
                                           double wavelength)
    {
        if (!(wavelength > 0.0))
            throw std::invalid_argument("wavelength must be > 0");
        const double k = 2.0 * std::numbers::pi / wavelength;
        return {k * array.spacing_v * direction.dot(array.vertical_axis),
                k * array.spacing_h * direction.dot(array.horizontal_axis)};
    }

    bool in_visible_region(const VisibleRegion &vr, const Position3 &point)
    {
        const Eigen::Vector2d rel{point.x - vr.apex.x, point.y - vr.apex.y};
        const Eigen::Vector2d axis{vr.axis.x(), vr.axis.y()};
        if (rel.norm() == 0.0)
            return true;
        if (axis.norm() == 0.0)
            throw GeometryError("visible-region axis has no horizontal component");
        const double cross = axis.x() * rel.y() - axis.y() * rel.x();
        const double angle = std::atan2(std::abs(cross), axis.dot(rel));
        return angle <= vr.half_angle_azimuth + vr_boundary_tolerance;
    }

    VisibleRegion tile_visible_region(const SaosLayout &layout, int tile, double half_angle_azimuth)
    {
        if (!(half_angle_azimuth > 0.0) || half_angle_azimuth > std::numbers::pi)
            throw std::invalid_argument("visible-region half angle must lie in (0, pi]");
        return {layout.tile_center(tile), layout.panel_normal, half_angle_azimuth};
    }

    double element_distance(const Position3 &ms, const SaosLayout &layout, int tile, int element)
    {
        if (element < 0 || element >= layout.elements_per_tile())
            throw std::out_of_range("element index " + std::to_string(element) + " out of range");
        const double r = distance(ms, element_positions(layout, tile)[static_cast<std::size_t>(element)]);
        if (!(r > 0.0))
            throw GeometryError("MS coincides with an RIS element");
        return r;
    }
}
