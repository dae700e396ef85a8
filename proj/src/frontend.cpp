#include "copat/frontend.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

#include "copat/subst.hpp"

namespace copat {

std::string ParseError::render() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": expected " +
         expected + ", found " + found;
}

namespace {

struct Token {
  enum class Kind {
    LowerIdent,
    UpperIdent,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Bar,
    Arrow,
    Dot,
    Bang,
    Quest,
    KwFun,
    KwRaise,
    KwEnd,
    KwCapture,
    Eof,
  };
  Kind kind;
  std::string text;
  int line;
  int column;
};

bool identChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1;
  int column = 1;
  std::vector<Token> out;
  bool failed = false;
  ParseError err;

  explicit Lexer(const std::string& s) : src(s) {}

  void fail(int l, int c, std::string expected, std::string found) {
    if (failed) return;
    failed = true;
    err = {l, c, std::move(expected), std::move(found)};
  }

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++pos;
  }

  void run() {
    while (pos < src.size() && !failed) {
      char c = src[pos];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      int l = line, col = column;
      if (c == '-') {
        if (pos + 1 < src.size() && src[pos + 1] == '-') {
          while (pos < src.size() && src[pos] != '\n') advance();
          continue;
        }
        if (pos + 1 < src.size() && src[pos + 1] == '>') {
          advance();
          advance();
          out.push_back({Token::Kind::Arrow, "->", l, col});
          continue;
        }
        fail(l, col, "'->' or '--'", std::string(1, c));
        return;
      }
      auto sym = [&](Token::Kind k) {
        advance();
        out.push_back({k, std::string(1, c), l, col});
      };
      switch (c) {
        case '(': sym(Token::Kind::LParen); continue;
        case ')': sym(Token::Kind::RParen); continue;
        case '{': sym(Token::Kind::LBrace); continue;
        case '}': sym(Token::Kind::RBrace); continue;
        case '|': sym(Token::Kind::Bar); continue;
        case '.': sym(Token::Kind::Dot); continue;
        case '!': sym(Token::Kind::Bang); continue;
        case '?': sym(Token::Kind::Quest); continue;
        default: break;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string t;
        while (pos < src.size() && identChar(src[pos])) {
          t += src[pos];
          advance();
        }
        Token::Kind k;
        if (t == "fun") k = Token::Kind::KwFun;
        else if (t == "raise") k = Token::Kind::KwRaise;
        else if (t == "end") k = Token::Kind::KwEnd;
        else if (t == "capture") k = Token::Kind::KwCapture;
        else if (std::isupper(static_cast<unsigned char>(t[0])))
          k = Token::Kind::UpperIdent;
        else k = Token::Kind::LowerIdent;
        out.push_back({k, t, l, col});
        continue;
      }
      fail(l, col, "a token", std::string(1, c));
      return;
    }
    out.push_back({Token::Kind::Eof, "end of input", line, column});
  }
};

struct Parser {
  std::vector<Token> toks;
  std::size_t i = 0;
  bool failed = false;
  ParseError err;

  const Token& peek() const { return toks[i]; }
  const Token& next() { return toks[i].kind == Token::Kind::Eof ? toks[i] : toks[i++]; }

  void fail(std::string expected) {
    if (failed) return;
    failed = true;
    err = {peek().line, peek().column, std::move(expected), peek().text};
  }

  bool eat(Token::Kind k, const char* what) {
    if (peek().kind == k) {
      next();
      return true;
    }
    fail(what);
    return false;
  }

  // Open is reserved for the object encoding.
  Name index() {
    if (peek().kind != Token::Kind::UpperIdent) {
      fail("an index name");
      return {};
    }
    if (peek().text == kReservedOpen) {
      fail("an index name (Open is reserved)");
      return {};
    }
    return next().text;
  }

  static constexpr const char* kReservedOpen = "Open";

  bool atomStartsMono() const {
    auto k = peek().kind;
    return k == Token::Kind::LowerIdent || k == Token::Kind::LParen ||
           k == Token::Kind::KwFun;
  }

  MonoPtr monoAtom() {
    if (peek().kind == Token::Kind::LowerIdent) return mVar(next().text);
    if (peek().kind == Token::Kind::LParen) {
      next();
      MonoPtr t = monoTerm();
      eat(Token::Kind::RParen, "')'");
      return t;
    }
    if (peek().kind == Token::Kind::KwFun) {
      next();
      eat(Token::Kind::LBrace, "'{'");
      std::vector<MonoOption> opts;
      if (peek().kind != Token::Kind::RBrace) {
        opts.push_back(monoOption());
        while (!failed && peek().kind == Token::Kind::Bar) {
          next();
          opts.push_back(monoOption());
        }
      }
      eat(Token::Kind::RBrace, "'}'");
      return mObj(opts);
    }
    fail("a term");
    return mVar("?");
  }

  MonoOption monoOption() {
    std::vector<CopatFrame> frames;
    while (!failed && (peek().kind == Token::Kind::LowerIdent ||
                       peek().kind == Token::Kind::UpperIdent)) {
      if (peek().kind == Token::Kind::LowerIdent)
        frames.push_back({CopatFrame::Kind::Bind, next().text});
      else
        frames.push_back({CopatFrame::Kind::Match, index()});
    }
    eat(Token::Kind::Arrow, "'->'");
    MonoPtr rhs = monoTerm();
    Copattern lhs = nullptr;
    for (auto it = frames.rbegin(); it != frames.rend(); ++it)
      lhs = cons(*it, lhs);
    return {lhs, rhs};
  }

  MonoPtr monoTerm() {
    MonoPtr t = monoAtom();
    while (!failed) {
      if (atomStartsMono()) {
        t = mApp(t, monoAtom());
      } else if (peek().kind == Token::Kind::UpperIdent) {
        t = mIdx(t, index());
      } else if (peek().kind == Token::Kind::Dot) {
        next();
        t = mDot(t);
      } else {
        break;
      }
    }
    return t;
  }

  bool atomStartsComp() const {
    auto k = peek().kind;
    return k == Token::Kind::LowerIdent || k == Token::Kind::LParen ||
           k == Token::Kind::KwRaise;
  }

  CompPtr compAtom() {
    if (peek().kind == Token::Kind::LowerIdent) return cVar(next().text);
    if (peek().kind == Token::Kind::KwRaise) {
      next();
      return cRaise();
    }
    if (peek().kind == Token::Kind::LParen) {
      next();
      CompPtr t = compTerm();
      eat(Token::Kind::RParen, "')'");
      return t;
    }
    fail("a term");
    return cVar("?");
  }

  CompOptPtr compOption() {
    if (peek().kind == Token::Kind::Quest) {
      next();
      if (peek().kind != Token::Kind::LowerIdent) {
        fail("a variable");
        return oDone("?", cRaise());
      }
      Name x = next().text;
      eat(Token::Kind::Arrow, "'->'");
      return oDone(x, compTerm());
    }
    if (peek().kind == Token::Kind::LowerIdent) {
      Name x = next().text;
      eat(Token::Kind::Arrow, "'->'");
      return oPop(x, compOption());
    }
    if (peek().kind == Token::Kind::UpperIdent) {
      Name idx = index();
      eat(Token::Kind::Arrow, "'->'");
      return oGet(idx, compOption());
    }
    fail("an option");
    return oDone("?", cRaise());
  }

  CompPtr compTerm() {
    if (peek().kind == Token::Kind::LBrace) {
      next();
      CompOptPtr o = compOption();
      eat(Token::Kind::RBrace, "'}'");
      eat(Token::Kind::Quest, "'?'");
      return cHandle(o, compTerm());
    }
    if (peek().kind == Token::Kind::KwCapture) {
      next();
      if (peek().kind != Token::Kind::LowerIdent) {
        fail("a covariable");
        return cRaise();
      }
      Name q = next().text;
      eat(Token::Kind::Arrow, "'->'");
      return cCapture(q, compResponse());
    }
    CompPtr t = compAtom();
    while (!failed) {
      if (atomStartsComp()) {
        t = cApp(t, compAtom());
      } else if (peek().kind == Token::Kind::UpperIdent) {
        t = cIdx(t, index());
      } else if (peek().kind == Token::Kind::Dot) {
        next();
        t = cDot(t);
      } else {
        break;
      }
    }
    return t;
  }

  CompResponse compResponse() {
    if (peek().kind == Token::Kind::KwEnd) {
      next();
      return rEnd();
    }
    CompPtr t = compTerm();
    if (failed) return rEnd();
    if (peek().kind == Token::Kind::Bang) {
      next();
      return rThen(t, compResponse());
    }
    // without '!' only a bare covariable closes a response
    if (const auto* v = std::get_if<CVar>(&t->node)) return rSplat(v->x);
    fail("'!'");
    return rEnd();
  }
};

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

bool monoIsAtom(const MonoPtr& m) {
  return std::holds_alternative<MVar>(m->node) ||
         std::holds_alternative<MObj>(m->node);
}

std::string prettyMonoAtom(const MonoPtr& m);

std::string prettyMono(const MonoPtr& m) {
  return std::visit(
      [&](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, MApp>)
          return prettyMono(t.fun) + " " + prettyMonoAtom(t.arg);
        else if constexpr (std::is_same_v<T, MIdx>)
          return prettyMono(t.obj) + " " + t.index;
        else if constexpr (std::is_same_v<T, MDot>)
          return prettyMono(t.self) + ".";
        else
          return prettyMonoAtom(m);
      },
      m->node);
}

std::string prettyMonoAtom(const MonoPtr& m) {
  if (const auto* v = std::get_if<MVar>(&m->node)) return v->x;
  if (const auto* o = std::get_if<MObj>(&m->node)) {
    std::string s = "fun {";
    bool first = true;
    for (const auto& opt : o->options) {
      s += first ? " " : " | ";
      first = false;
      for (auto f = opt.lhs; f; f = f->tail) s += f->head.name + " ";
      s += "-> " + prettyMono(opt.rhs);
    }
    s += " }";
    return s;
  }
  if (std::holds_alternative<MSem>(m->node))
    throw std::logic_error("semantic leaf has no surface syntax");
  return "(" + prettyMono(m) + ")";
}

std::string prettyComp(const CompPtr& m);
std::string prettyCompResp(const CompResponse& r);

std::string prettyCompAtom(const CompPtr& m) {
  if (const auto* v = std::get_if<CVar>(&m->node)) return v->x;
  if (std::holds_alternative<CRaise>(m->node)) return "raise";
  if (std::holds_alternative<CSem>(m->node))
    throw std::logic_error("semantic leaf has no surface syntax");
  return "(" + prettyComp(m) + ")";
}

std::string prettyCompOpt(const CompOptPtr& o) {
  return std::visit(
      [&](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, OPop>)
          return t.x + " -> " + prettyCompOpt(t.rest);
        else if constexpr (std::is_same_v<T, OGet>)
          return t.index + " -> " + prettyCompOpt(t.rest);
        else
          return "? " + t.failVar + " -> " + prettyComp(t.rhs);
      },
      o->node);
}

// the head of a postfix chain must itself be a chain; a handle there needs
// parens or its fallback would swallow the chain
std::string prettyCompHead(const CompPtr& m) {
  if (std::holds_alternative<CHandle>(m->node))
    return "(" + prettyComp(m) + ")";
  return prettyComp(m);
}

std::string prettyComp(const CompPtr& m) {
  return std::visit(
      [&](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, CApp>)
          return prettyCompHead(t.fun) + " " + prettyCompAtom(t.arg);
        else if constexpr (std::is_same_v<T, CIdx>)
          return prettyCompHead(t.obj) + " " + t.index;
        else if constexpr (std::is_same_v<T, CDot>)
          return prettyCompHead(t.self) + ".";
        else if constexpr (std::is_same_v<T, CHandle>)
          return "{ " + prettyCompOpt(t.option) + " } ? " + prettyComp(t.fallback);
        else if constexpr (std::is_same_v<T, CCapture>)
          // parenthesized so the response body cannot swallow a following '!'
          return "(capture " + t.q + " -> " + prettyCompResp(t.body) + ")";
        else
          return prettyCompAtom(m);
      },
      m->node);
}

std::string prettyCompResp(const CompResponse& r) {
  std::string s;
  for (const auto& m : r.chain) s += prettyComp(m) + " ! ";
  if (std::holds_alternative<REnd>(r.tail)) return s + "end";
  if (const auto* q = std::get_if<RSplat>(&r.tail)) return s + q->q;
  throw std::logic_error("semantic response tail has no surface syntax");
}

// a handle or capture argument in a chain needs parens only via atoms; the
// chain printers above always go through prettyCompAtom for argument position

template <class P, class F>
std::string prettyQ(const Question<P>& q, F payload) {
  std::string s = "[";
  bool first = true;
  for (auto n = q; n; n = n->tail) {
    if (!first) s += " ";
    first = false;
    if (const auto* ix = std::get_if<IdxFrame>(&n->head))
      s += ix->index;
    else
      s += payload(std::get<ArgFrame<P>>(n->head).payload);
  }
  return s + "]";
}

bool hasOpen(const MonoPtr& m) {
  return std::visit(
      [&](const auto& t) -> bool {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, MApp>)
          return hasOpen(t.fun) || hasOpen(t.arg);
        else if constexpr (std::is_same_v<T, MIdx>)
          return t.index == "Open" || hasOpen(t.obj);
        else if constexpr (std::is_same_v<T, MDot>)
          return hasOpen(t.self);
        else if constexpr (std::is_same_v<T, MObj>) {
          for (const auto& opt : t.options) {
            for (auto f = opt.lhs; f; f = f->tail)
              if (f->head.kind == CopatFrame::Kind::Match &&
                  f->head.name == "Open")
                return true;
            if (hasOpen(opt.rhs)) return true;
          }
          return false;
        } else {
          return false;
        }
      },
      m->node);
}

bool hasOpen(const CompPtr& m);
bool hasOpen(const CompResponse& r);

bool hasOpen(const CompOptPtr& o) {
  return std::visit(
      [&](const auto& t) -> bool {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, OPop>)
          return hasOpen(t.rest);
        else if constexpr (std::is_same_v<T, OGet>)
          return t.index == "Open" || hasOpen(t.rest);
        else
          return hasOpen(t.rhs);
      },
      o->node);
}

bool hasOpen(const CompPtr& m) {
  return std::visit(
      [&](const auto& t) -> bool {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, CApp>)
          return hasOpen(t.fun) || hasOpen(t.arg);
        else if constexpr (std::is_same_v<T, CIdx>)
          return t.index == "Open" || hasOpen(t.obj);
        else if constexpr (std::is_same_v<T, CDot>)
          return hasOpen(t.self);
        else if constexpr (std::is_same_v<T, CHandle>)
          return hasOpen(t.option) || hasOpen(t.fallback);
        else if constexpr (std::is_same_v<T, CCapture>)
          return hasOpen(t.body);
        else
          return false;
      },
      m->node);
}

bool hasOpen(const CompResponse& r) {
  for (const auto& m : r.chain)
    if (hasOpen(m)) return true;
  return false;
}

}  // namespace

std::variant<MonoPtr, ParseError> parseMonoTerm(const std::string& src) {
  Lexer lx(src);
  lx.run();
  if (lx.failed) return lx.err;
  Parser p{std::move(lx.out)};
  MonoPtr t = p.monoTerm();
  if (!p.failed && p.peek().kind != Token::Kind::Eof) p.fail("end of input");
  if (p.failed) return p.err;
  return freshen(t);
}

std::variant<CompResponse, ParseError> parseCompResponse(const std::string& src) {
  Lexer lx(src);
  lx.run();
  if (lx.failed) return lx.err;
  Parser p{std::move(lx.out)};
  CompResponse r = p.compResponse();
  if (!p.failed && p.peek().kind != Token::Kind::Eof) p.fail("end of input");
  if (p.failed) return p.err;
  return freshen(r);
}

std::string pretty(const MonoPtr& m) { return prettyMono(m); }
std::string pretty(const CompPtr& m) { return prettyComp(m); }
std::string pretty(const CompOptPtr& o) { return prettyCompOpt(o); }
std::string pretty(const CompResponse& r) { return prettyCompResp(r); }

std::string pretty(const MonoQuestion& q) {
  return prettyQ(q, [](const MonoPtr& m) {
    return monoIsAtom(m) ? prettyMono(m) : "(" + prettyMono(m) + ")";
  });
}

std::string pretty(const CompQuestion& q) {
  return prettyQ(q, [](const CompPtr& m) {
    bool atom = std::holds_alternative<CVar>(m->node) ||
                std::holds_alternative<CRaise>(m->node);
    return atom ? prettyComp(m) : "(" + prettyComp(m) + ")";
  });
}

std::string pretty(const MonoMachineState& s) {
  if (const auto* ev = std::get_if<MonoEval>(&s))
    return "<" + prettyMono(ev->focus) + " | " + pretty(ev->k) + ">";
  const auto& cm = std::get<MonoComatching>(s);
  std::string lhs;
  for (auto f = cm.lhs; f; f = f->tail) lhs += f->head.name + " ";
  return "<" + lhs + "-> " + prettyMono(cm.rhs) + " | " + pretty(cm.ctx) +
         " || " + prettyMonoAtom(mObj(cm.options)) + " | " + pretty(cm.saved) +
         ">";
}

namespace {

std::string prettyMeta(const CompMetaCont& s) {
  std::string out = "[";
  bool first = true;
  for (auto n = s; n; n = n->tail) {
    if (!first) out += "; ";
    first = false;
    out += prettyComp(n->head);
  }
  return out + "]";
}

}  // namespace

std::string pretty(const CompMachineState& s) {
  if (const auto* d = std::get_if<CDelimSt>(&s))
    return "<" + prettyCompResp(d->r) + " | " + prettyMeta(d->s) + ">";
  if (const auto* rf = std::get_if<CRefocusSt>(&s))
    return "<" + prettyComp(rf->m) + " | " + pretty(rf->k) + " | " +
           prettyMeta(rf->s) + ">";
  const auto& cm = std::get<CComatchSt>(s);
  return "<" + prettyCompOpt(cm.o) + " | " + prettyComp(cm.m) + " | " +
         pretty(cm.k) + " | " + prettyMeta(cm.s) + ">";
}

MonoPtr resolveNames(const MonoPtr& m) {
  if (hasOpen(m)) throw std::invalid_argument("Open is a reserved index name");
  return freshen(m);
}

CompResponse resolveNames(const CompResponse& r) {
  if (hasOpen(r)) throw std::invalid_argument("Open is a reserved index name");
  return freshen(r);
}

}  // namespace copat
