// Copyright 2026 The modcpg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "modcpg/world.h"

#include <cmath>
#include <numbers>
#include <optional>

#include "modcpg/error.h"

namespace modcpg::sim {

using composer::kJoints;
using composer::kLegs;

namespace {

constexpr int kBelly = kLegs;  // index of the belly point in support solves
constexpr double kStubWeight = 1.0;

struct Plane {
  double a = 0.0;  // height at the body center
  double b = 0.0;  // slope along body x
  double c = 0.0;  // slope along body y

  double At(double x, double y) const { return a + b * x + c * y; }
};

// Points are (body x, body y, body height needed for that point to touch
// its surface). The body settles on the facet of their upper hull that lies
// above the center of mass, which is the lowest plane that no point pierces.
std::optional<Plane> SupportPlane(const std::array<Vec3, kLegs + 1>& pts,
                                  double cx, double cy) {
  constexpr int n = kLegs + 1;
  std::optional<Plane> best;
  double best_height = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const double x1 = pts[j].x - pts[i].x, y1 = pts[j].y - pts[i].y;
        const double z1 = pts[j].z - pts[i].z;
        const double x2 = pts[k].x - pts[i].x, y2 = pts[k].y - pts[i].y;
        const double z2 = pts[k].z - pts[i].z;
        const double det = x1 * y2 - x2 * y1;
        if (std::abs(det) < 1e-12) continue;
        const double dx = cx - pts[i].x, dy = cy - pts[i].y;
        const double u = (dx * y2 - x2 * dy) / det;
        const double v = (x1 * dy - y1 * dx) / det;
        if (u < -1e-12 || v < -1e-12 || u + v > 1.0 + 1e-12) continue;
        Plane p;
        p.b = (z1 * y2 - z2 * y1) / det;
        p.c = (x1 * z2 - x2 * z1) / det;
        p.a = pts[i].z - p.b * pts[i].x - p.c * pts[i].y;
        bool above_all = true;
        for (int m = 0; m < n && above_all; ++m) {
          if (pts[m].z > p.At(pts[m].x, pts[m].y) + 1e-12) above_all = false;
        }
        if (!above_all) continue;
        const double height = p.At(cx, cy);
        if (!best || height < best_height) {
          best = p;
          best_height = height;
        }
      }
    }
  }
  return best;
}

struct Support {
  Plane plane;
  std::array<bool, kLegs> contact{};
  bool belly = false;
  bool supported = true;
};

Support SolveSupport(const WorldState& s, const std::array<double, kLegs>& h,
                     double belly_height) {
  std::array<Vec3, kLegs + 1> pts;
  for (int l = 0; l < kLegs; ++l) {
    const Vec3& p = s.legs[l].tip_body;
    pts[l] = {p.x, p.y, h[l] - p.z};
  }
  pts[kBelly] = {0.0, 0.0, belly_height};
  Support out;
  auto plane = SupportPlane(pts, 0.0, s.com_offset_y);
  if (!plane) {
    // Center of mass outside every support triangle: the robot tips over.
    out.supported = false;
    double top = pts[0].z;
    for (const auto& p : pts) top = std::max(top, p.z);
    plane = Plane{top, 0.0, 0.0};
  }
  out.plane = *plane;
  for (int l = 0; l < kLegs; ++l) {
    out.contact[l] =
        pts[l].z >= out.plane.At(pts[l].x, pts[l].y) - kContactTolerance;
  }
  out.belly = belly_height >= out.plane.a - kContactTolerance;
  return out;
}

void ApplyPose(WorldState& s, const Support& support, double x, double y,
               double yaw) {
  s.pose.x = x;
  s.pose.y = y;
  s.pose.yaw = yaw;
  s.pose.z = support.plane.a;
  s.pose.pitch = std::atan(support.plane.b);
  s.pose.roll = std::atan(support.plane.c);
  s.belly_contact = support.belly;
}

Vec2 ToWorld(const Pose& pose, double c, double s, const Vec3& p) {
  return {pose.x + c * p.x - s * p.y, pose.y + s * p.x + c * p.y};
}

}  // namespace

int WorldState::ContactCount() const {
  int n = 0;
  for (const auto& leg : legs) n += leg.contact ? 1 : 0;
  return n;
}

double WorldState::HeightAboveGround(const TerrainSpec& terrain) const {
  return pose.z - terrain.HeightAt(pose.x, pose.y);
}

WorldState InitialState(const RobotModel& model, const TerrainSpec& terrain,
                        double com_offset_y) {
  WorldState s;
  s.com_offset_y = com_offset_y;
  s.pose.x = terrain.start.x;
  s.pose.y = terrain.start.y;
  s.pose.yaw = terrain.start.yaw;
  const double c = std::cos(s.pose.yaw), sn = std::sin(s.pose.yaw);
  std::array<double, kLegs> h{};
  for (int l = 0; l < kLegs; ++l) {
    s.legs[l].tip_body = LegTip(model, l, s.legs[l].q);
    const Vec2 w = ToWorld(s.pose, c, sn, s.legs[l].tip_body);
    h[l] = terrain.HeightAt(w.x, w.y);
  }
  const Support support =
      SolveSupport(s, h, terrain.HeightAt(s.pose.x, s.pose.y) +
                             model.body_half_thickness);
  ApplyPose(s, support, s.pose.x, s.pose.y, s.pose.yaw);
  for (int l = 0; l < kLegs; ++l) {
    auto& leg = s.legs[l];
    const Vec2 w = ToWorld(s.pose, c, sn, leg.tip_body);
    leg.contact = support.contact[l];
    leg.tip_world = {w.x, w.y,
                     leg.contact ? h[l]
                                 : support.plane.At(leg.tip_body.x,
                                                    leg.tip_body.y) +
                                       leg.tip_body.z};
  }
  return s;
}

WorldState StepWorld(const WorldState& prev,
                     const composer::JointMatrix& commands,
                     const TerrainSpec& terrain, const RobotModel& model) {
  WorldState next = prev;
  next.step = prev.step + 1;
  if (prev.fallen) return next;

  const double gain = 1.0 - std::exp(-kDt / model.servo_time_constant);
  for (int l = 0; l < kLegs; ++l) {
    auto& leg = next.legs[l];
    for (int j = 0; j < kJoints; ++j) {
      if (!std::isfinite(commands[l][j])) {
        throw Error(ErrorCode::kNonFinite, "non-finite joint command");
      }
      const double target = Clamp(model, j, commands[l][j]);
      leg.q[j] += gain * (target - leg.q[j]);
    }
    leg.tip_body = LegTip(model, l, leg.q);
  }

  // Surfaces under the tips, predicted with the previous body placement.
  const double c0 = std::cos(prev.pose.yaw), s0 = std::sin(prev.pose.yaw);
  std::array<double, kLegs> h{};
  std::array<bool, kLegs> stubbed{};
  for (int l = 0; l < kLegs; ++l) {
    const LegState& old = prev.legs[l];
    const Vec2 w = ToWorld(prev.pose, c0, s0, next.legs[l].tip_body);
    if (!old.contact || old.stubbed) {
      for (const auto& box : terrain.boxes) {
        if (box.ContainsXY(w.x, w.y) &&
            !box.ContainsXY(old.tip_world.x, old.tip_world.y) &&
            old.tip_world.z < box.top() - kStubTolerance) {
          stubbed[l] = true;
          break;
        }
      }
    }
    h[l] = stubbed[l] ? terrain.HeightAt(old.tip_world.x, old.tip_world.y)
                      : terrain.HeightAt(w.x, w.y);
  }

  const Support support =
      SolveSupport(next, h, terrain.HeightAt(prev.pose.x, prev.pose.y) +
                                model.body_half_thickness);

  // Friction-weighted rigid fit of the anchored points, expressed in the
  // previous body frame: find (theta, t) with R(theta) p + t ~ q.
  double wsum = 0.0;
  int anchors = 0;
  double px = 0.0, py = 0.0, qx = 0.0, qy = 0.0;
  std::array<double, kLegs + 1> weight{};
  std::array<Vec2, kLegs + 1> p{}, q{};
  for (int l = 0; l < kLegs; ++l) {
    const LegState& old = prev.legs[l];
    const bool anchored = stubbed[l] || (support.contact[l] && old.contact);
    if (!anchored) continue;
    if (old.stubbed) {
      const double dx = old.tip_world.x - prev.pose.x;
      const double dy = old.tip_world.y - prev.pose.y;
      q[l] = {c0 * dx + s0 * dy, -s0 * dx + c0 * dy};
    } else {
      q[l] = {old.tip_body.x, old.tip_body.y};
    }
    p[l] = {next.legs[l].tip_body.x, next.legs[l].tip_body.y};
    weight[l] = stubbed[l]
                    ? kStubWeight
                    : terrain.FrictionAt(old.tip_world.x, old.tip_world.y);
    ++anchors;
  }
  if (support.belly && prev.belly_contact) {
    weight[kBelly] = terrain.FrictionAt(prev.pose.x, prev.pose.y);
    ++anchors;
  }
  for (int i = 0; i <= kLegs; ++i) {
    wsum += weight[i];
    px += weight[i] * p[i].x;
    py += weight[i] * p[i].y;
    qx += weight[i] * q[i].x;
    qy += weight[i] * q[i].y;
  }
  double theta = 0.0, tx = 0.0, ty = 0.0;
  if (wsum > 0.0) {
    px /= wsum;
    py /= wsum;
    qx /= wsum;
    qy /= wsum;
    double cross = 0.0, dot = 0.0;
    for (int i = 0; i <= kLegs; ++i) {
      if (weight[i] == 0.0) continue;
      const double ax = p[i].x - px, ay = p[i].y - py;
      const double bx = q[i].x - qx, by = q[i].y - qy;
      cross += weight[i] * (ax * by - ay * bx);
      dot += weight[i] * (ax * bx + ay * by);
    }
    theta = (cross == 0.0 && dot == 0.0) ? 0.0 : std::atan2(cross, dot);
    const double ct = std::cos(theta), st = std::sin(theta);
    tx = qx - (ct * px - st * py);
    ty = qy - (st * px + ct * py);
    const double traction =
        std::min(1.0, wsum / anchors / kFullTractionFriction);
    theta *= traction;
    tx *= traction;
    ty *= traction;
  }

  ApplyPose(next, support, prev.pose.x + c0 * tx - s0 * ty,
            prev.pose.y + s0 * tx + c0 * ty, prev.pose.yaw + theta);

  const double c1 = std::cos(next.pose.yaw), s1 = std::sin(next.pose.yaw);
  for (int l = 0; l < kLegs; ++l) {
    auto& leg = next.legs[l];
    const LegState& old = prev.legs[l];
    Vec2 w = ToWorld(next.pose, c1, s1, leg.tip_body);
    leg.stubbed = false;
    if (stubbed[l]) {
      for (const auto& box : terrain.boxes) {
        if (box.ContainsXY(w.x, w.y) && old.tip_world.z < box.top()) {
          w = {old.tip_world.x, old.tip_world.y};
          leg.stubbed = true;
          break;
        }
      }
    }
    leg.contact = support.contact[l];
    leg.stance = leg.contact && old.contact;
    const double z =
        leg.contact ? terrain.HeightAt(w.x, w.y)
                    : support.plane.At(leg.tip_body.x, leg.tip_body.y) +
                          leg.tip_body.z;
    leg.tip_speed = std::hypot(w.x - old.tip_world.x, w.y - old.tip_world.y) /
                    kDt;
    leg.tip_world = {w.x, w.y, z};
  }

  if (!support.supported) {
    next.fallen = true;
    next.fall_reason = "tipped over";
  } else if (next.HeightAboveGround(terrain) <
             kFallHeightFraction * model.neutral_height) {
    next.fallen = true;
    next.fall_reason = "body height";
  } else if (std::abs(next.pose.roll) > kFallAngle ||
             std::abs(next.pose.pitch) > kFallAngle) {
    next.fallen = true;
    next.fall_reason = "attitude";
  }
  return next;
}

Vec3 BodyToWorld(const Pose& pose, const Vec3& v) {
  // R = Rz(yaw) * Ry(-pitch) * Rx(roll).
  const double cr = std::cos(pose.roll), sr = std::sin(pose.roll);
  const double cp = std::cos(-pose.pitch), sp = std::sin(-pose.pitch);
  const double cy = std::cos(pose.yaw), sy = std::sin(pose.yaw);
  const Vec3 a{v.x, cr * v.y - sr * v.z, sr * v.y + cr * v.z};
  const Vec3 b{cp * a.x + sp * a.z, a.y, -sp * a.x + cp * a.z};
  return {cy * b.x - sy * b.y, sy * b.x + cy * b.y, b.z};
}

std::optional<double> DistanceReading(const WorldState& state,
                                      const TerrainSpec& terrain,
                                      const sensors::ObstacleSensorConfig& cfg,
                                      const RobotModel& model) {
  const double mount = cfg.mount_pitch_deg * std::numbers::pi / 180.0;
  const Vec3 head = BodyToWorld(state.pose, {model.head_offset, 0.0, 0.0});
  const Vec3 origin{state.pose.x + head.x, state.pose.y + head.y,
                    state.pose.z + head.z};
  const Vec3 dir =
      BodyToWorld(state.pose, {std::sin(mount), 0.0, -std::cos(mount)});
  return terrain.Raycast(origin, dir, cfg.max_range);
}

sensors::Observation Observe(const WorldState& state,
                             const TerrainSpec& terrain,
                             const sensors::ObstacleSensorConfig& cfg,
                             const RobotModel& model) {
  sensors::Observation obs;
  obs.distance = DistanceReading(state, terrain, cfg, model);
  obs.roll = state.pose.roll;
  obs.yaw = state.pose.yaw;
  obs.desired_yaw = terrain.DesiredYaw(state.step * kDt, state.pose.x,
                                       state.pose.y, terrain.start.yaw);
  return obs;
}

}  // namespace modcpg::sim
