#include <sstream>

#include "doctest.h"
#include "nashdcf/session.hpp"

using namespace nashdcf;

namespace {

std::string run1(Session& s, const std::string& cmd) {
  std::ostringstream out;
  s.execute(cmd, out);
  return out.str();
}

struct Script {
  int failed;
  std::string out, err;
};

Script run_script(Session& s, const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out, err;
  const int failed = s.run(in, out, err);
  return {failed, out.str(), err.str()};
}

std::string error_of(Session& s, const std::string& cmd) {
  try {
    run1(s, cmd);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

std::string restore_error(const std::string& text) {
  Session s;
  try {
    s.restore(text);
  } catch (const SessionError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("documented command examples") {
  Session s;
  CHECK(run1(s, "let a = var") == "a = ~4.113250378782\n");
  CHECK(run1(s, "sign a - 4") == "positive\n");
  CHECK(run1(s, "dp p = y' - y") == "p = y' - y\n");
  run1(s, "let f = witness p (y - 1)");
  CHECK(run1(s, "check p f") == "zero\n");
  CHECK(run1(s, "wp member real \"L1^2 - 1\" 2") == "true\n");
  CHECK(run1(s, "wp member real \"L1^2 - 1\" 0") == "false\n");
  CHECK(run1(s, "wp member complex \"L1\" I") == "true\n");
}

TEST_CASE("element expressions and queries") {
  Session s;
  CHECK(run1(s, "var") == "L0\n");
  CHECK(run1(s, "let h = 1/2 + 1/3") == "h = 5/6\n");
  CHECK(run1(s, "let r = adjoin Z^2 - 2 real 2") == "r = ~1.414213562373\n");
  CHECK(run1(s, "let n = adjoin Z^2 - 2 real 1") == "n = -~1.414213562373\n");
  CHECK(run1(s, "adjoin Z^2 + 1") == "I\n");
  CHECK(run1(s, "adjoin Z^2 + 4 smallest") == "2*I\n");
  CHECK(run1(s, "iszero r^2 - 2") == "true\n");
  CHECK(run1(s, "iszero r + n") == "true\n");
  CHECK(run1(s, "iszero r - 1") == "false\n");
  CHECK(run1(s, "sign n") == "negative\n");
  CHECK(run1(s, "sign r*r - 2") == "zero\n");
  CHECK(run1(s, "print (1 + I)^2") == "2*I\n");
  CHECK(run1(s, "print r + I") == "~1.414213562373 + I\n");
  CHECK(run1(s, "eval r --prec 40") == "~1.414213562373\n");
  CHECK(run1(s, "eval L0 --prec 10") == "~4.113\n");
  CHECK(run1(s, "print _") == "2*I\n");
  CHECK(run1(s, "delta h") == "0\n");
  CHECK(run1(s, "print delta(L0)") == "0\n");
}

TEST_CASE("witness commands") {
  Session s;
  run1(s, "dp p = (1 + y)*y' - y");
  CHECK(run1(s, "solutions 3").find("sol3 = ") != std::string::npos);
  CHECK(run1(s, "check p sol1") == "zero\n");
  CHECK(run1(s, "iszero sol1 - sol2") == "false\n");
  CHECK(run1(s, "let g = owitness (y' - y) (y) at 1 1") != "");
  CHECK(run1(s, "check (y' - y) g") == "zero\n");
  CHECK(run1(s, "sign g") == "positive\n");
  CHECK(run1(s, "rootbetween (y - 2) 1 3") == "2\n");
  CHECK(run1(s, "extend 1 with e1") == "e1 = L4\n");
  CHECK(run1(s, "iszero delta(e1) - e1") == "true\n");
  CHECK(run1(s, "extend 2 with c, -s as s c") == "s = L5\nc = L6\n");
  CHECK(run1(s, "iszero delta(delta(s)) + s") == "true\n");
}

TEST_CASE("errors are per command and carry positions") {
  Session s;
  const Script r = run_script(s, "let a = var\nbogus\nlet b = a +\nlet c = 1/0\nsign a\nsign I\n");
  CHECK(r.failed == 4);
  CHECK(r.out == "a = ~4.113250378782\npositive\n");
  CHECK(r.err.find("line 2: unknown command 'bogus' at column 1") != std::string::npos);
  CHECK(r.err.find("line 3: unexpected end of input at column 12") != std::string::npos);
  CHECK(r.err.find("line 4: division by zero") != std::string::npos);
  CHECK(r.err.find("line 6: ") != std::string::npos);
  CHECK(error_of(s, "let x = L9") == "unallocated tag L9 at column 9");
  CHECK(error_of(s, "let y = 1") == "reserved name 'y' at column 5");
  CHECK(error_of(s, "let L3 = 1") == "reserved name 'L3' at column 5");
  CHECK(error_of(s, "dp q = y' + (y") == "expected ')' at column 15");
  CHECK(error_of(s, "witness (y) (y')") == "blum_witness: ord q must be below ord p");
  CHECK(error_of(s, "adjoin Z^2 - 2 real 3") == "selector out of range");
  CHECK(error_of(s, "let z = Z") == "Z is only allowed in adjoin at column 9");
  // comments and blank lines are not commands
  CHECK(run_script(s, "# comment\n\n   \nsign 1 # trailing\n").failed == 0);
}

TEST_CASE("raxioms report") {
  Session s;
  const std::string rep = run1(s, "raxioms \"L1\" \"L1 - 1\" --samples 100 --seed 7");
  CHECK(rep == "seed 7 samples 100\nR0 OK 100/100\nR1 OK 100/100\nR2 OK found (1000001)\n");
  const std::string cx = run1(s, "raxioms \"L1*L2 - 1\" \"L2^2 + L1\" --samples 50 --seed 2 --mode complex");
  CHECK(cx.find("R1 OK 50/50") != std::string::npos);
}

TEST_CASE("differential polynomial text round trip") {
  Session s;
  run1(s, "let a = 3");
  const std::vector<std::pair<std::string, std::string>> corpus = {
      {"y' - y", "y' - y"},
      {"(1 + y)*y' - y", "y*y' + y' - y"},
      {"y'' + y", "y'' + y"},
      {"y[3] - y*y'", "y[3] - y*y'"},
      {"y'^2 - 4*y", "y'^2 - 4*y"},
      {"a*y' - 1/2", "3*y' - 1/2"},
      {"(y - 1)^2", "y^2 - 2*y + 1"},
      {"-y", "-y"},
      {"0*y + 7", "7"},
  };
  for (const auto& [src, canonical] : corpus) {
    const std::string printed = run1(s, "dp p = " + src);
    CHECK(printed == "p = " + canonical + "\n");
    CHECK(run1(s, "dp q = " + canonical) == "q = " + canonical + "\n");
  }
}

TEST_CASE("save format") {
  Session empty;
  const std::string e = empty.save_text();
  CHECK(e == "nashdcf/1\ntags 0\nend 1\n");
  Session back;
  back.restore(e);
  CHECK(back.save_text() == e);

  Session s;
  run_script(s, "let a = var\ndp p = y' - y\nlet f = witness p (y - 1)\nbogus\n");
  const std::string text = s.save_text();
  CHECK(text.rfind("nashdcf/1\ncmd let a = var\ncmd dp p = y' - y\ncmd let f = witness p (y - 1)\nfail bogus\n", 0) == 0);
  CHECK(text.find("\nelem a real ~4.113250378782 def Z - L0\n") != std::string::npos);
  CHECK(text.find("\nwitness blum tags L1 selections smallest\n") != std::string::npos);
  CHECK(text.substr(text.size() - 7) == "end 10\n");
}

TEST_CASE("replay reproduces elements and bytes") {
  Session s;
  const Script r = run_script(s,
                              "let a = var\n"
                              "dp p = y' - y\n"
                              "let f = witness p (y - 1)\n"
                              "let r = adjoin Z^3 - a real 1\n"
                              "let g = owitness (y' - y) at 1 1\n"
                              "extend 2 with c, -s as s c\n"
                              "let d = delta(f) + r*g\n");
  REQUIRE(r.failed == 0);
  const std::string text = s.save_text();
  Session t;
  t.restore(text);
  REQUIRE(t.elements().size() == s.elements().size());
  for (const auto& [name, e] : s.elements()) CHECK((e - *t.element(name)).is_zero());
  CHECK(t.save_text() == text);
  // the replayed session keeps going from the same state
  CHECK(run1(t, "var") == run1(s, "var"));
}

TEST_CASE("load failures") {
  Session s;
  run_script(s, "let a = var\nlet b = a + 1\n");
  const std::string text = s.save_text();

  std::string cut = text.substr(0, text.find("elem b"));
  CHECK(restore_error(cut) == "truncated session file: last valid record 4 (elem a real ~4.113250378782 def Z - L0)");
  CHECK(restore_error(text.substr(0, text.size() - 3)) ==
        "truncated session file: last valid record 5 (elem b real ~5.113250378782 def Z - L0 - 1)");
  CHECK(restore_error("nashdcf/2\nend 0\n") == "version mismatch: expected nashdcf/1, found nashdcf/2");
  CHECK(restore_error("hello\n") == "not a session file");

  std::string tampered = text;
  tampered.replace(tampered.find("~5.113"), 6, "~5.114");
  CHECK(restore_error(tampered) == "corrupt record 5: does not match the replayed state");
  std::string bad_cmd = text;
  bad_cmd.replace(bad_cmd.find("cmd let b = a + 1"), 17, "cmd let b = q + 1");
  CHECK(restore_error(bad_cmd).rfind("corrupt record 2: replay failed: unknown identifier 'q'", 0) == 0);
  std::string junk = text;
  junk.insert(junk.find("tags"), "zzz 1\n");
  CHECK(restore_error(junk) == "corrupt record 3: unknown kind");

  // a failed load leaves the session untouched
  Session keep;
  run1(keep, "let k = 7");
  CHECK_THROWS_AS(keep.restore(cut), SessionError);
  CHECK(run1(keep, "print k") == "7\n");
}
