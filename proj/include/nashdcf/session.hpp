#ifndef NASHDCF_SESSION_HPP
#define NASHDCF_SESSION_HPP

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nashdcf/diffclosure.hpp"
#include "nashdcf/element.hpp"

namespace nashdcf {

/// Decimal text of a value: exact for rational constants, otherwise
/// truncated to `digits` places behind a '~', or "?" when refinement cannot
/// decide the digits. Complex values print as "re + im*I".
std::string approximate(const Element& e, int digits = 12);

/// One-line deterministic description: realness, approximation and defining
/// polynomial ("def ?" past the degree budget).
std::string describe_element(const Element& e);

/// Load failure: bad header, corrupt record or truncated file.
class SessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command interpreter over one Engine.
///
/// Every executed command is journaled (failed ones too, since they may have
/// consumed tags). A saved session is the journal followed by records
/// derived from the resulting state; loading replays the journal on a fresh
/// engine and checks the derived records against the replay.
class Session {
 public:
  Session();
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// Runs one command line, writing its output to `out`. Throws on error.
  void execute(std::string_view line, std::ostream& out);
  /// Runs every line of `in`; errors go to `err` as "line N: message".
  /// Returns the number of failed commands.
  int run(std::istream& in, std::ostream& out, std::ostream& err);

  std::string save_text() const;
  void save(const std::string& path) const;
  /// Replaces this session by the replay of `text`. Throws SessionError.
  void restore(std::string_view text);
  void load(const std::string& path);

  Engine& engine();
  std::optional<Element> element(const std::string& name) const;
  const std::map<std::string, Element>& elements() const;

  struct State;  // defined in session.cpp

 private:
  std::unique_ptr<State> st_;
};

}  // namespace nashdcf

#endif
