// Copyright 2026 The Flaky Lens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flakylens/smells.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace flakylens {
namespace {

using java::Invocation;
using java::MethodDecl;
using java::Statement;
using java::StatementKind;

constexpr std::array<std::string_view, 10> kAssertionNames = {
    "assertArrayEquals", "assertEquals", "assertFalse", "assertNotNull",
    "assertNotSame",     "assertNull",   "assertSame",  "assertThat",
    "assertTrue",        "fail",
};

const std::unordered_set<std::string_view>& JavaLangTypes() {
  static const std::unordered_set<std::string_view> kTypes = {
      "Thread", "Runnable", "String", "StringBuilder", "StringBuffer",
      "Math", "StrictMath", "System", "Runtime", "Process", "ProcessBuilder",
      "Integer", "Long", "Short", "Byte", "Double", "Float", "Boolean",
      "Character", "Number", "Object", "Class", "ClassLoader", "Enum",
      "Record", "Void", "Iterable", "Comparable", "CharSequence",
      "AutoCloseable", "ThreadLocal", "InheritableThreadLocal",
      "ThreadGroup", "Throwable", "Exception", "Error", "RuntimeException",
      "InterruptedException", "IllegalArgumentException",
      "IllegalStateException", "NullPointerException",
      "UnsupportedOperationException", "IndexOutOfBoundsException",
      "ArithmeticException", "ClassCastException", "AssertionError",
  };
  return kTypes;
}

// Well-known members of packages commonly imported on demand.
const std::unordered_map<std::string_view,
                         std::unordered_set<std::string_view>>&
WildcardPackages() {
  static const std::unordered_map<std::string_view,
                                  std::unordered_set<std::string_view>>
      kPackages = {
          {"java.io",
           {"File", "FileInputStream", "FileOutputStream", "FileReader",
            "FileWriter", "InputStream", "OutputStream", "BufferedReader",
            "BufferedWriter", "BufferedInputStream", "BufferedOutputStream",
            "IOException", "PrintStream", "PrintWriter", "Reader", "Writer",
            "ByteArrayInputStream", "ByteArrayOutputStream",
            "InputStreamReader", "OutputStreamWriter", "RandomAccessFile",
            "Serializable", "Closeable", "StringReader", "StringWriter",
            "ObjectInputStream", "ObjectOutputStream", "UncheckedIOException",
            "FileNotFoundException", "FilenameFilter", "FileFilter"}},
          {"java.util.concurrent",
           {"ExecutorService", "Executors", "Executor", "Future",
            "CompletableFuture", "CountDownLatch", "CyclicBarrier",
            "Semaphore", "TimeUnit", "ConcurrentHashMap", "ConcurrentMap",
            "Callable", "ScheduledExecutorService", "ThreadPoolExecutor",
            "BlockingQueue", "LinkedBlockingQueue", "ArrayBlockingQueue",
            "CopyOnWriteArrayList", "TimeoutException", "ExecutionException",
            "ForkJoinPool", "Phaser", "Exchanger", "ThreadFactory",
            "ConcurrentLinkedQueue", "ScheduledFuture", "FutureTask"}},
          {"java.util.concurrent.atomic",
           {"AtomicInteger", "AtomicLong", "AtomicBoolean", "AtomicReference",
            "AtomicIntegerArray", "LongAdder"}},
          {"java.util.concurrent.locks",
           {"ReentrantLock", "Lock", "ReadWriteLock", "ReentrantReadWriteLock",
            "Condition", "LockSupport"}},
          {"java.util",
           {"List", "ArrayList", "LinkedList", "Map", "HashMap", "TreeMap",
            "LinkedHashMap", "Set", "HashSet", "TreeSet", "LinkedHashSet",
            "Collections", "Arrays", "Iterator", "Optional", "Random", "UUID",
            "Date", "Calendar", "Properties", "Objects", "Collection",
            "Queue", "Deque", "ArrayDeque", "Scanner", "Locale", "Timer",
            "TimerTask", "Vector", "Stack", "Hashtable", "StringJoiner",
            "Comparator", "EnumSet", "EnumMap", "PriorityQueue", "BitSet",
            "NoSuchElementException", "Base64", "TimeZone"}},
          {"java.net",
           {"URL", "URI", "Socket", "ServerSocket", "HttpURLConnection",
            "URLConnection", "InetAddress", "InetSocketAddress",
            "DatagramSocket", "URLEncoder", "URLDecoder",
            "SocketTimeoutException", "MalformedURLException",
            "UnknownHostException", "SocketException"}},
          {"java.sql",
           {"Connection", "DriverManager", "Statement", "PreparedStatement",
            "ResultSet", "SQLException", "Timestamp", "Types",
            "CallableStatement", "ResultSetMetaData", "DatabaseMetaData"}},
          {"javax.sql", {"DataSource"}},
          {"javax.persistence",
           {"EntityManager", "EntityManagerFactory", "Persistence", "Query",
            "EntityTransaction"}},
          {"javax.net", {"SocketFactory", "ServerSocketFactory"}},
          {"javax.net.ssl",
           {"SSLContext", "SSLSocket", "SSLSocketFactory",
            "HttpsURLConnection", "TrustManager"}},
          {"java.nio.file", {"Files", "Path", "Paths", "StandardOpenOption"}},
          {"java.time",
           {"Instant", "Duration", "LocalDate", "LocalDateTime", "Clock",
            "ZonedDateTime", "ZoneId"}},
      };
  return kPackages;
}

constexpr std::array<std::string_view, 5> kExternalResourcePrefixes = {
    "java.sql.", "javax.sql.", "javax.persistence.", "java.net.", "javax.net.",
};

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool IsCapitalized(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

std::string_view LastSegment(std::string_view dotted) {
  const auto pos = dotted.rfind('.');
  return pos == std::string_view::npos ? dotted : dotted.substr(pos + 1);
}

// "final java.util.List<String>[] " -> "java.util.List"
std::string BareTypeName(std::string_view type_text) {
  std::string out;
  for (char c : type_text) {
    if (c == '<' || c == '[' || c == '(') break;
    if (IsIdentChar(c) || c == '.' || (c == '@' && out.empty())) {
      out.push_back(c);
    } else if (std::isspace(static_cast<unsigned char>(c)) && !out.empty()) {
      // A leading modifier or annotation is followed by the real type.
      if (out == "final" || out.front() == '@') {
        out.clear();
      }
    }
  }
  while (!out.empty() && out.back() == '.') out.pop_back();
  return out;
}

bool IsPathCheck(const Invocation& inv, bool strict) {
  const std::string_view name = inv.method_name;
  if (inv.is_constructor) return false;
  if (name == "getPath" || name == "getAbsolutePath" ||
      name == "getCanonicalPath") {
    return true;
  }
  return !strict && name == "exists";
}

bool IsFileClass(const ResolvedClass& cls) {
  return cls.qualified_name && *cls.qualified_name == "java.io.File";
}

// A path check only counts when its receiver is a File.
bool HasPathCheck(const std::vector<Invocation>& invocations, bool strict,
                  const ClassContext& ctx, const MethodScope& scope) {
  return std::any_of(invocations.begin(), invocations.end(),
                     [&](const Invocation& inv) {
                       if (!IsPathCheck(inv, strict)) return false;
                       auto cls = ResolveInvocationClass(inv, ctx, scope);
                       return cls && IsFileClass(*cls);
                     });
}

bool IsLibrary(const ResolvedClass& cls, const SmellOptions& options) {
  if (!cls.qualified_name) return false;
  for (const std::string& prefix : options.library_prefixes) {
    if (cls.qualified_name->starts_with(prefix)) return true;
  }
  return false;
}

bool IsThreadClass(const ResolvedClass& cls) {
  if (!cls.qualified_name) return false;
  const std::string& q = *cls.qualified_name;
  return q == "java.lang.Thread" || q == "java.lang.Runnable" ||
         q.starts_with("java.util.concurrent.");
}

bool IsExternalResourceClass(const ResolvedClass& cls) {
  if (!cls.qualified_name) return false;
  const std::string& q = *cls.qualified_name;
  if (q == "java.io.File") return true;
  for (std::string_view p : kExternalResourcePrefixes) {
    if (q.starts_with(p)) return true;
  }
  return false;
}

std::optional<ResolvedClass> ResolveTypeText(std::string_view type_text,
                                             const ClassContext& ctx) {
  const std::string bare = BareTypeName(type_text);
  if (bare.empty() || bare == "var") return std::nullopt;
  ResolvedClass out;
  out.simple_name = std::string(LastSegment(bare));
  out.qualified_name = QualifyTypeName(bare, ctx);
  return out;
}

bool IsProductionInvocation(const Invocation& inv, const ClassContext& ctx,
                            const MethodScope& scope) {
  if (!ctx.production_confident || inv.is_constructor || !inv.receiver_text) {
    return false;
  }
  auto cls = ResolveInvocationClass(inv, ctx, scope);
  return cls && cls->simple_name == ctx.production_class_name;
}

}  // namespace

std::string_view ToString(SmellKind kind) {
  switch (kind) {
    case SmellKind::kIndirectTesting:
      return "IndirectTesting";
    case SmellKind::kEagerTesting:
      return "EagerTesting";
    case SmellKind::kTestRunWar:
      return "TestRunWar";
    case SmellKind::kConditionalLogic:
      return "ConditionalLogic";
    case SmellKind::kFireAndForget:
      return "FireAndForget";
    case SmellKind::kMysteryGuest:
      return "MysteryGuest";
    case SmellKind::kAssertionRoulette:
      return "AssertionRoulette";
    case SmellKind::kResourceOptimism:
      return "ResourceOptimism";
  }
  return "";
}

std::string_view ShortCode(SmellKind kind) {
  switch (kind) {
    case SmellKind::kIndirectTesting:
      return "IT";
    case SmellKind::kEagerTesting:
      return "ET";
    case SmellKind::kTestRunWar:
      return "RW";
    case SmellKind::kConditionalLogic:
      return "CL";
    case SmellKind::kFireAndForget:
      return "FF";
    case SmellKind::kMysteryGuest:
      return "MG";
    case SmellKind::kAssertionRoulette:
      return "AR";
    case SmellKind::kResourceOptimism:
      return "RO";
  }
  return "";
}

std::optional<SmellKind> ParseSmellKind(std::string_view text) {
  for (SmellKind k : kAllSmells) {
    if (text == ToString(k) || text == ShortCode(k)) return k;
  }
  return std::nullopt;
}

std::optional<std::string_view> FlagFor(SmellKind kind) {
  switch (kind) {
    case SmellKind::kIndirectTesting:
      return "//IT";
    case SmellKind::kEagerTesting:
      return "//ET";
    case SmellKind::kTestRunWar:
      return "//RW";
    case SmellKind::kResourceOptimism:
      return "//RO";
    default:
      return std::nullopt;
  }
}

bool IsAssertionName(std::string_view method_name) {
  return std::find(kAssertionNames.begin(), kAssertionNames.end(),
                   method_name) != kAssertionNames.end();
}

ClassContext BuildClassContext(const java::CompilationUnit& unit,
                               const java::ClassDecl& cls,
                               const java::MethodDecl* init_method,
                               const java::TestConventions& conventions) {
  ClassContext ctx;
  ctx.class_name = cls.name;
  auto production = java::InferProductionClassName(cls.name, conventions);
  ctx.production_class_name = std::move(production.name);
  ctx.production_confident = production.confident;
  ctx.imports = unit.imports;
  ctx.static_imports = unit.static_imports;
  for (const java::FieldDecl& f : cls.fields_) {
    ctx.field_types[f.name] = f.declared_type_text;
    if (f.is_static && !f.is_final) ctx.static_nonfinal_fields.insert(f.name);
  }
  ctx.init_method = init_method;
  return ctx;
}

std::optional<std::string> QualifyTypeName(std::string_view type_text,
                                           const ClassContext& ctx) {
  const std::string bare = BareTypeName(type_text);
  if (bare.empty()) return std::nullopt;
  if (bare.find('.') != std::string::npos) {
    if (!IsCapitalized(bare)) return bare;
    // Outer.Inner: qualify the outer name.
    const std::string outer = bare.substr(0, bare.find('.'));
    if (auto q = QualifyTypeName(outer, ctx)) {
      return *q + bare.substr(outer.size());
    }
    return std::nullopt;
  }
  for (const std::string& imp : ctx.imports) {
    if (LastSegment(imp) == bare) return imp;
  }
  if (JavaLangTypes().contains(bare)) return "java.lang." + bare;
  for (const std::string& imp : ctx.imports) {
    if (!imp.ends_with(".*")) continue;
    const std::string_view pkg =
        std::string_view(imp).substr(0, imp.size() - 2);
    auto it = WildcardPackages().find(pkg);
    if (it != WildcardPackages().end() && it->second.contains(bare)) {
      return std::string(pkg) + "." + bare;
    }
  }
  return std::nullopt;
}

std::optional<ResolvedClass> ResolveInvocationClass(
    const Invocation& invocation, const ClassContext& ctx,
    const MethodScope& scope) {
  if (invocation.is_constructor) {
    ResolvedClass out{invocation.method_name, invocation.qualified_hint};
    if (!out.qualified_name) {
      out.qualified_name = QualifyTypeName(invocation.method_name, ctx);
    }
    return out;
  }
  if (!invocation.receiver_text) {
    if (invocation.qualified_hint) {
      return ResolvedClass{std::string(LastSegment(*invocation.qualified_hint)),
                           invocation.qualified_hint};
    }
    return ResolvedClass{ctx.class_name, std::nullopt};
  }
  const std::string& recv = *invocation.receiver_text;
  if (recv == "this" || recv == "super") {
    return ResolvedClass{ctx.class_name, std::nullopt};
  }
  if (recv.starts_with("\"")) {
    return ResolvedClass{"String", "java.lang.String"};
  }
  if (recv.starts_with("new ") || recv.starts_with("new\t")) {
    // Only a bare `new T(...)`; anything chained after it is unknown.
    const std::size_t open = recv.find('(');
    if (open == std::string::npos || recv.back() != ')') return std::nullopt;
    int depth = 0;
    for (std::size_t i = open; i < recv.size(); ++i) {
      if (recv[i] == '(') ++depth;
      if (recv[i] == ')' && --depth == 0 && i + 1 != recv.size()) {
        return std::nullopt;
      }
    }
    const std::string type = BareTypeName(std::string_view(recv).substr(4));
    if (type.empty()) return std::nullopt;
    ResolvedClass out{std::string(LastSegment(type)),
                      invocation.qualified_hint};
    if (!out.qualified_name) out.qualified_name = QualifyTypeName(type, ctx);
    return out;
  }
  if (!std::all_of(recv.begin(), recv.end(),
                   [](char c) { return IsIdentChar(c) || c == '.'; })) {
    return std::nullopt;
  }
  std::vector<std::string_view> segments;
  {
    std::string_view rest = recv;
    while (true) {
      const auto dot = rest.find('.');
      segments.push_back(rest.substr(0, dot));
      if (dot == std::string_view::npos) break;
      rest = rest.substr(dot + 1);
    }
  }
  if (segments.size() == 2 && segments[0] == "this") {
    auto it = ctx.field_types.find(std::string(segments[1]));
    if (it == ctx.field_types.end()) return std::nullopt;
    return ResolveTypeText(it->second, ctx);
  }
  if (segments.size() == 1) {
    const std::string name(segments[0]);
    if (auto it = scope.local_types.find(name); it != scope.local_types.end()) {
      return ResolveTypeText(it->second, ctx);
    }
    if (auto it = ctx.field_types.find(name); it != ctx.field_types.end()) {
      return ResolveTypeText(it->second, ctx);
    }
    if (IsCapitalized(name)) {
      ResolvedClass out{name, invocation.qualified_hint};
      if (!out.qualified_name) out.qualified_name = QualifyTypeName(name, ctx);
      return out;
    }
    return std::nullopt;
  }
  if (invocation.qualified_hint &&
      *invocation.qualified_hint == recv) {
    return ResolvedClass{std::string(segments.back()), recv};
  }
  return std::nullopt;
}

MethodScope BuildMethodScope(const java::MethodDecl& method,
                             const ClassContext& ctx) {
  MethodScope scope;
  java::ForEachStatement(method.statements, [&](const Statement& s) {
    if (!s.declared_type) return;
    std::string type = *s.declared_type;
    if (type == "var") {
      // `var x = new Foo(...)`: take the constructed type.
      for (const Invocation& inv : s.invocations) {
        if (inv.is_constructor) {
          type = inv.method_name;
          break;
        }
      }
    }
    for (const std::string& name : s.declared_names) {
      scope.local_types.emplace(name, type);
    }
  });
  java::ForEachStatement(method.statements, [&](const Statement& s) {
    for (const Invocation& inv : s.invocations) {
      if (IsProductionInvocation(inv, ctx, scope)) {
        ++scope.production_invocations[inv.method_name];
      }
    }
  });
  return scope;
}

std::set<SmellKind> ClassifyStatement(const Statement& stmt,
                                      const ClassContext& ctx,
                                      const MethodScope& scope,
                                      const SmellOptions& options) {
  std::set<SmellKind> kinds;
  if (stmt.kind == StatementKind::kIfStatement) {
    kinds.insert(SmellKind::kConditionalLogic);
  }

  const bool eager_method = ctx.production_confident &&
                            scope.production_invocations.size() >= 2;
  for (const Invocation& inv : stmt.invocations) {
    if (IsAssertionName(inv.method_name) && !inv.is_constructor) {
      kinds.insert(SmellKind::kAssertionRoulette);
    }
    if (eager_method && IsProductionInvocation(inv, ctx, scope)) {
      kinds.insert(SmellKind::kEagerTesting);
    }
    auto cls = ResolveInvocationClass(inv, ctx, scope);
    if (!cls) continue;
    if (cls->simple_name != ctx.class_name &&
        cls->simple_name != ctx.production_class_name &&
        !IsLibrary(*cls, options)) {
      kinds.insert(SmellKind::kIndirectTesting);
    }
    if (IsThreadClass(*cls)) kinds.insert(SmellKind::kFireAndForget);
    if (IsExternalResourceClass(*cls)) kinds.insert(SmellKind::kMysteryGuest);
    if (IsFileClass(*cls) && !scope.path_checked) {
      kinds.insert(SmellKind::kResourceOptimism);
    }
  }

  for (const std::string& name : stmt.referenced_names) {
    const auto dot = name.find('.');
    if (dot != std::string::npos) {
      if (name.substr(0, dot) == ctx.class_name &&
          ctx.static_nonfinal_fields.contains(name.substr(dot + 1))) {
        kinds.insert(SmellKind::kTestRunWar);
      }
    } else if (ctx.static_nonfinal_fields.contains(name) &&
               !scope.local_types.contains(name)) {
      kinds.insert(SmellKind::kTestRunWar);
    }
  }
  return kinds;
}

std::vector<SmellAnnotation> DetectSmells(const MethodDecl& method,
                                          const ClassContext& ctx,
                                          const SmellOptions& options) {
  MethodScope scope = BuildMethodScope(method, ctx);
  bool init_checked = false;
  if (ctx.init_method != nullptr) {
    const MethodScope init_scope = BuildMethodScope(*ctx.init_method, ctx);
    java::ForEachStatement(
        ctx.init_method->statements, [&](const Statement& s) {
          init_checked = init_checked || HasPathCheck(s.invocations,
                                                      options.strict, ctx,
                                                      init_scope);
        });
  }

  std::vector<SmellAnnotation> out;
  std::vector<std::size_t> path;
  bool seen_check = false;
  auto walk = [&](auto&& self, const std::vector<Statement>& statements)
      -> void {
    for (std::size_t i = 0; i < statements.size(); ++i) {
      const Statement& s = statements[i];
      path.push_back(i);
      const bool own_check =
          HasPathCheck(s.invocations, options.strict, ctx, scope);
      scope.path_checked =
          init_checked || (!options.strict && (seen_check || own_check));
      const std::set<SmellKind> kinds =
          ClassifyStatement(s, ctx, scope, options);
      for (SmellKind k : kAllSmells) {
        if (!kinds.contains(k)) continue;
        SmellAnnotation a{path, s.line, k, std::nullopt};
        if (auto flag = FlagFor(k)) a.flag = std::string(*flag);
        out.push_back(std::move(a));
      }
      seen_check = seen_check || own_check;
      self(self, s.children);
      path.pop_back();
    }
  };
  walk(walk, method.statements);
  return out;
}

}  // namespace flakylens
