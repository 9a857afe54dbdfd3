#include "oceanscope/derived.hpp"

namespace oceanscope {

DerivedFieldKind DerivedFieldKind::parse(std::string_view text) {
  if (text == "speed") return speed();
  if (text == "vorticity") return vorticity();
  if (text == "curl" || text == "curl-magnitude" || text == "curlMagnitude") return curlMagnitude();
  if (text == "okubo-weiss" || text == "okuboWeiss" || text == "ow") return okuboWeiss();
  if (text.starts_with("user:") && text.size() > 5) return userScalar(std::string(text.substr(5)));
  fail(ErrorCode::invalidParameter, "unknown derived field kind '" + std::string(text) + "'");
}

std::string DerivedFieldKind::label() const {
  switch (kind) {
    case Kind::speed: return "speed";
    case Kind::vorticity: return "vorticity";
    case Kind::curlMagnitude: return "curl";
    case Kind::okuboWeiss: return "okubo_weiss";
    case Kind::userScalar: return name;
  }
  return "unknown";
}

}  // namespace oceanscope
