#pragma once

#include <string>

#include <json.hpp>

#include "hazstereo/scene/scene.hpp"

namespace hazstereo {

// Scene documents round-trip exactly: every float is widened to double and
// written shortest-round-trip, so load(dump(s)) == s bitwise.
nlohmann::json scene_to_json(const SceneGraph& scene);
SceneGraph scene_from_json(const nlohmann::json& j);

nlohmann::json rig_to_json(const StereoRig& rig);
StereoRig rig_from_json(const nlohmann::json& j);

nlohmann::json pose_to_json(const CameraPose& pose);
CameraPose pose_from_json(const nlohmann::json& j);

nlohmann::json case_to_json(const CaseInfo& info);
CaseInfo case_from_json(const nlohmann::json& j);

void save_scene(const SceneGraph& scene, const std::string& path);
SceneGraph load_scene(const std::string& path);

} // namespace hazstereo
