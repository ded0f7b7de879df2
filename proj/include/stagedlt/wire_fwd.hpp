#pragma once

#include <json.hpp>

namespace lt {

using Json = nlohmann::ordered_json;

}  // namespace lt
