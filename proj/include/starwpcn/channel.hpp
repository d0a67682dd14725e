// SPDX-License-Identifier: Apache-2.0
//
// starwpcn: max-min throughput optimization for STAR-RIS assisted WPCNs
// Copyright (C) 2026 starwpcn developers
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


#ifndef STARWPCN_CHANNEL_HPP
#define STARWPCN_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "starwpcn/random.hpp"
#include "starwpcn/types.hpp"

// Geometry-based Rician channels between the HAP, the surface and the users.
namespace starwpcn
{
    struct Point3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;
    };

    // Users in the reflection region share the HAP's side of the surface.
    enum class Region
    {
        transmission,
        reflection
    };

    const char *to_string(Region r);

    struct UserPlacement
    {
        Point3 position;
        Region region = Region::reflection;
    };

    struct FadingParams
    {
        double pathloss_exponent_hap_ris = 2.2;
        double pathloss_exponent_ris_user = 2.2;
        double pathloss_exponent_direct = 3.4;
        double reference_gain_db = -30.0; // at 1 m
        double rician_k_factor = 2.0;     // linear; +inf gives pure LoS
        double carrier_frequency = 750e6; // Hz
        double bandwidth = 1e6;           // Hz
        bool reciprocal = true;           // uplink = conjugate transpose of downlink

        void validate() const;
    };

    struct ScenarioGeometry
    {
        Point3 hap{0.0, 0.0, 2.0};
        Point3 ris{10.0, 0.0, 0.0};
        Point3 ris_normal{-1.0, 0.0, 0.0}; // points into the reflection half-space
        Point3 ris_axis{0.0, 1.0, 0.0};    // element axis of the surface ULA
        Point3 hap_axis{0.0, 1.0, 0.0};    // antenna axis of the HAP ULA
        std::vector<UserPlacement> users;
        int n_antennas = 4;
        int n_elements = 16;
        // A reflect-only surface serves the reflection region only.
        bool transmissive = true;

        void validate() const;
    };

    // Downlink: G (M x N), g_a[k] (N), g_s[k] (M). Uplink: H (N x M),
    // h_a[k] (1 x N), h_s[k] (1 x M). The received downlink scalar for a
    // passive diagonal Theta is g_s^H Theta G v + g_a^H v.
    struct ChannelSet
    {
        cmat G;
        std::vector<cvec> g_a;
        std::vector<cvec> g_s;
        cmat H;
        std::vector<crow> h_a;
        std::vector<crow> h_s;

        int n_users() const { return static_cast<int>(g_a.size()); }
        int n_antennas() const { return static_cast<int>(G.cols()); }
        int n_elements() const { return static_cast<int>(G.rows()); }
    };

    // Gk[k] = [diag(conj(g_s[k])) G; g_a[k]^H]          ((M+1) x N)
    // Hk[k] = [H diag(conj(h_s[k])), h_a[k]^H]           (N x (M+1))
    struct CombinedChannels
    {
        std::vector<cmat> Gk;
        std::vector<cmat> Hk;

        int n_users() const { return static_cast<int>(Gk.size()); }
        int n_antennas() const { return Gk.empty() ? 0 : static_cast<int>(Gk[0].cols()); }
        int n_elements() const { return Gk.empty() ? 0 : static_cast<int>(Gk[0].rows()) - 1; }
    };

    double distance(const Point3 &a, const Point3 &b);

    // reference_gain * d^(-exponent).
    double path_gain(double distance, double exponent, const FadingParams &params);

    ChannelSet generate_channels(const ScenarioGeometry &geometry, const FadingParams &params, std::uint64_t seed);

    CombinedChannels combine(const ChannelSet &channels);

    // Same users with the surface removed (M = 0): only the direct rows and
    // columns remain.
    CombinedChannels direct_only(const CombinedChannels &combined);

    // One user of the given region drawn uniformly in angle and radius on the
    // half-disc of radius `radius` around the surface centre (z = surface z).
    Point3 sample_user_position(const ScenarioGeometry &geometry, Region region, double radius, Rng &rng);

    // Default two-user layout: user t (transmission) and user r (reflection),
    // each placed at random in its half-disc.
    ScenarioGeometry default_geometry(int n_antennas, int n_elements, std::uint64_t seed);

    // Same HAP and users with a reflect-only surface at `position`, facing
    // -y so both half-discs lie in its reflection half-space.
    ScenarioGeometry with_reflect_only_surface(const ScenarioGeometry &geometry, Point3 position = {10.0, 1.0, 0.0});
}

#endif
