#!/usr/bin/env python3
"""Regenerates everything under fixtures/.

Golden files are written from the documented rendering rules, not by running
the C++ code, so the tests compare two independent constructions.
"""

import json
import os
import sys

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")

UP = "http://purl.uniprot.org/core/"
SKOS = "http://www.w3.org/2004/02/skos/core#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD = "http://www.w3.org/2001/XMLSchema#"
ORTH = "http://purl.org/net/orth#"
UNIPROT = "https://sparql.uniprot.org/sparql"
OMA = "https://sparql.omabrowser.org/sparql"

PREFIXES = {"up": UP, "orth": ORTH, "taxon": "http://purl.uniprot.org/taxonomy/"}


def write(rel, text):
    path = os.path.join(ROOT, rel)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def write_json(rel, doc):
    write(rel, json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


def uri(v):
    return {"type": "uri", "value": v}


def lit(v, lang=None, datatype=None):
    out = {"type": "literal", "value": v}
    if lang:
        out["xml:lang"] = lang
    if datatype:
        out["datatype"] = datatype
    return out


def results(vars_, rows):
    return {"head": {"vars": vars_}, "results": {"bindings": rows}}


def expand(name, ns):
    prefix, local = name.split(":", 1)
    return {"up": UP, "skos": SKOS, "rdfs": RDFS, "rdf": RDF, "xsd": XSD, "orth": ORTH}[prefix] + local


# ---------------------------------------------------------------- VoID ----

VOID_VARS = ["subjectClass", "prop", "objectClass", "objectDatatype", "triples"]


def void_row(cls, prop, obj_class=None, obj_dt=None, triples=None):
    row = {"subjectClass": uri(cls), "prop": uri(prop)}
    if obj_class:
        row["objectClass"] = uri(obj_class)
    if obj_dt:
        row["objectDatatype"] = uri(obj_dt)
    if triples is not None:
        row["triples"] = lit(str(triples), datatype=XSD + "integer")
    return row


# (class, [(predicate, kind, value, triples)]). kind: class / dt / iri / lit.
# Triple counts decide predicate order inside a shape (descending).
UNIPROT_SCHEMA = [
    ("up:Protein", [
        ("up:encodedBy", "class", ["up:Gene"], 9100),
        ("up:organism", "class", ["up:Taxon"], 9000),
        ("up:mnemonic", "dt", "xsd:string", 8900),
        ("up:annotation", "class", ["up:Disease_Annotation", "up:Domain_Annotation", "up:Function_Annotation",
                                    "up:Subcellular_Location_Annotation"], 8800),
        ("up:sequence", "class", ["up:Simple_Sequence"], 8700),
        ("up:classifiedWith", "class", ["up:Keyword"], 8600),
        ("up:enzyme", "class", ["up:Enzyme"], 8500),
        ("up:citation", "class", ["up:Journal_Citation"], 8400),
        ("rdfs:seeAlso", "iri", None, 8300),
        ("up:reviewed", "dt", "xsd:boolean", 8200),
    ]),
    ("up:Gene", [
        ("skos:prefLabel", "dt", "xsd:string", 700),
        ("skos:altLabel", "dt", "xsd:string", 600),
        ("up:locusName", "dt", "xsd:string", 500),
    ]),
    ("up:Disease", [
        ("skos:altLabel", "dt", "xsd:string", 50000),
        ("rdfs:comment", "dt", "xsd:string", 40000),
        ("up:mnemonic", "dt", "xsd:string", 30000),
        ("skos:prefLabel", "dt", "xsd:string", 20000),
        ("rdfs:seeAlso", "iri", None, 10000),
    ]),
    ("up:Disease_Annotation", [
        ("up:sequence", "class", ["up:Chain_Annotation", "up:Modified_Sequence"], 3000),
        ("rdfs:comment", "dt", "xsd:string", 2000),
        ("up:disease", "iri", None, 1000),
    ]),
    ("up:Chain_Annotation", [
        ("up:range", "iri", None, 400),
        ("rdfs:comment", "dt", "xsd:string", 300),
    ]),
    ("up:Modified_Sequence", [
        ("rdf:value", "dt", "xsd:string", 200),
        ("up:modified", "dt", "xsd:date", 100),
    ]),
    ("up:Taxon", [
        ("up:scientificName", "dt", "xsd:string", 700),
        ("up:rank", "iri", None, 600),
        ("rdfs:subClassOf", "class", ["up:Taxon"], 500),
    ]),
    ("up:Enzyme", [
        ("skos:prefLabel", "dt", "xsd:string", 300),
        ("rdfs:comment", "lit", None, 200),
    ]),
    ("up:Pathway", [
        ("rdfs:label", "dt", "xsd:string", 300),
        ("rdfs:subClassOf", "class", ["up:Pathway"], 200),
    ]),
    ("up:Citation", [
        ("up:title", "dt", "xsd:string", 300),
        ("up:date", "dt", "xsd:gYear", 200),
    ]),
    ("up:Journal_Citation", [
        ("up:title", "dt", "xsd:string", 400),
        ("up:name", "dt", "xsd:string", 300),
        ("up:volume", "dt", "xsd:string", 200),
        ("up:date", "dt", "xsd:gYear", 100),
    ]),
    ("up:Structure", [
        ("up:method", "iri", None, 300),
        ("up:resolution", "dt", "xsd:float", 200),
    ]),
    ("up:Sequence", [
        ("rdf:value", "dt", "xsd:string", 300),
        ("up:mass", "dt", "xsd:int", 200),
    ]),
    ("up:Simple_Sequence", [
        ("rdf:value", "dt", "xsd:string", 400),
        ("up:mass", "dt", "xsd:int", 300),
        ("up:md5Checksum", "dt", "xsd:string", 200),
    ]),
    ("up:Domain_Annotation", [
        ("rdfs:comment", "dt", "xsd:string", 300),
        ("up:range", "iri", None, 200),
    ]),
    ("up:Function_Annotation", [
        ("rdfs:comment", "dt", "xsd:string", 300),
    ]),
    ("up:Subcellular_Location_Annotation", [
        ("up:locatedIn", "iri", None, 300),
        ("rdfs:comment", "dt", "xsd:string", 200),
    ]),
    ("up:Tissue", [
        ("skos:prefLabel", "dt", "xsd:string", 300),
        ("rdfs:seeAlso", "iri", None, 200),
    ]),
    ("up:Keyword", [
        ("skos:prefLabel", "dt", "xsd:string", 300),
        ("up:category", "class", ["up:Keyword"], 200),
    ]),
    ("up:Cluster", [
        ("up:member", "class", ["up:Protein"], 300),
        ("up:identity", "dt", "xsd:float", 200),
    ]),
]

OMA_SCHEMA = [
    ("orth:Protein", [
        ("orth:organism", "class", ["orth:Organism"], 300),
        ("rdfs:label", "dt", "xsd:string", 200),
    ]),
    ("orth:Organism", [
        ("orth:taxRange", "iri", None, 100),
    ]),
    ("orth:OrthologsCluster", [
        ("orth:hasHomologousMember", "class", ["orth:Protein"], 500),
    ]),
]


def schema_rows(schema):
    rows = []
    for cls, preds in schema:
        c = expand(cls, None)
        rows.append(void_row(c, RDF + "type", obj_class=c, triples=99999))
        for pred, kind, value, triples in preds:
            p = expand(pred, None)
            if kind == "class":
                for oc in value:
                    rows.append(void_row(c, p, obj_class=expand(oc, None), triples=triples))
            elif kind == "dt":
                rows.append(void_row(c, p, obj_dt=expand(value, None), triples=triples))
            elif kind == "lit":
                rows.append(void_row(c, p, obj_dt=RDFS + "Literal", triples=triples))
            else:
                rows.append(void_row(c, p, triples=triples))
    return rows


def make_void():
    write_json("void/uniprot.srj", results(VOID_VARS, schema_rows(UNIPROT_SCHEMA)))
    write_json("void/oma.srj", results(VOID_VARS, schema_rows(OMA_SCHEMA)))
    da = [s for s in UNIPROT_SCHEMA if s[0] == "up:Disease_Annotation"]
    rows = schema_rows(da)
    # Same rows delivered out of order and with a duplicate.
    write_json("void/disease_annotation.srj", results(VOID_VARS, rows))
    write_json("void/disease_annotation_shuffled.srj", results(VOID_VARS, list(reversed(rows)) + [rows[1]]))
    write_json("void/protein_gene.srj", results(VOID_VARS, [
        void_row(UP + "Protein", UP + "encodedBy", obj_class=UP + "Gene", triples=10),
    ]))
    write_json("void/empty.srj", results(VOID_VARS, []))

    # Ten raw rows; rows 3 and 7 bind both an object class and a datatype.
    ex = "http://example.org/"
    split = [
        void_row(ex + "A", ex + "p1", obj_class=ex + "B"),
        void_row(ex + "A", ex + "p2", obj_dt=XSD + "string"),
        void_row(ex + "A", ex + "p3", obj_class=ex + "C", obj_dt=XSD + "int"),
        void_row(ex + "A", ex + "p4"),
        void_row(ex + "B", ex + "p1", obj_dt=RDFS + "Literal"),
        void_row(ex + "B", ex + "p5", obj_class=ex + "A"),
        void_row(ex + "B", ex + "p6", obj_class=ex + "D", obj_dt=RDFS + "Literal"),
        void_row(ex + "C", ex + "p2", obj_dt=XSD + "date"),
        void_row(ex + "A", ex + "p1", obj_class=ex + "B"),
        void_row(ex + "C", ex + "p7"),
    ]
    write_json("void/split.srj", results(VOID_VARS, split))
    # Expected VoidRows, hand-enumerated: (class, predicate, kind, value).
    expected = [
        ["A", "p1", "class", "B"],
        ["A", "p2", "datatype", XSD + "string"],
        ["A", "p3", "class", "C"],
        ["A", "p3", "datatype", XSD + "int"],
        ["A", "p4", "iri", ""],
        ["B", "p1", "literal", ""],
        ["B", "p5", "class", "A"],
        ["B", "p6", "class", "D"],
        ["B", "p6", "literal", ""],
        ["C", "p2", "datatype", XSD + "date"],
        ["C", "p7", "iri", ""],
    ]
    write_json("void/split.expected.json", expected)


# -------------------------------------------------------------- labels ----

def make_labels():
    rows = [
        {"class": uri(UP + "Protein"), "label": lit("Protein", "en"),
         "comment": lit("Description of the amino acid sequence and related data.", "en")},
        {"class": uri(UP + "Gene"), "label": lit("Gene", "en")},
        {"class": uri(UP + "Disease"), "label": lit("Krankheit", "de"), "comment": lit("Eine Krankheit.", "de")},
        {"class": uri(UP + "Disease"), "label": lit("Disease", "en"),
         "comment": lit("The description of a disease.", "en")},
        {"class": uri(UP + "Disease"), "label": lit("Maladie", "fr"), "comment": lit("Une maladie.", "fr")},
        {"class": uri(UP + "Disease_Annotation"), "label": lit("Disease Annotation"),
         "comment": lit("Describes diseases associated with a deficiency of the protein.")},
        {"class": uri(UP + "Taxon"), "label": lit("Taxon", "en"), "comment": lit("An element of a taxonomy.")},
        {"class": uri(UP + "Enzyme"), "label": lit("Enzyme", "en")},
        {"class": uri(UP + "Pathway"), "label": lit("Pathway", "en")},
        {"class": uri(UP + "Journal_Citation"), "label": lit("Journal citation", "en")},
        {"class": uri(UP + "Keyword"), "label": lit("Keyword", "en")},
        {"class": uri(UP + "Tissue"), "label": lit("Tissue", "en")},
        {"class": uri(UP + "Simple_Sequence"), "label": lit("Simple sequence", "en")},
        # up:Cluster and others deliberately have no labels.
    ]
    write_json("labels/uniprot.srj", results(["class", "label", "comment"], rows))
    write_json("labels/oma.srj", results(["class", "label", "comment"], [
        {"class": uri(ORTH + "Protein"), "label": lit("Protein", "en")},
    ]))


# ------------------------------------------------------------ examples ----

EX_PREFIX = "PREFIX up: <http://purl.uniprot.org/core/>\nPREFIX taxon: <http://purl.uniprot.org/taxonomy/>\n"

EXAMPLES = [
    ("Select all reviewed human proteins",
     "SELECT ?protein WHERE {\n  ?protein a up:Protein ;\n    up:reviewed true ;\n    up:organism taxon:9606 .\n}"),
    ("List the genes encoding human proteins",
     "SELECT ?protein ?gene WHERE {\n  ?protein a up:Protein ;\n    up:organism taxon:9606 ;\n    up:encodedBy ?gene .\n}"),
    ("Get the preferred label of every gene",
     "SELECT ?gene ?label WHERE {\n  ?gene a up:Gene ;\n    skos:prefLabel ?label .\n}"),
    ("Find diseases and their preferred names",
     "SELECT ?disease ?name WHERE {\n  ?disease a up:Disease ;\n    skos:prefLabel ?name .\n}"),
    ("List proteins annotated with a disease",
     "SELECT ?protein ?disease WHERE {\n  ?protein a up:Protein ;\n    up:annotation ?annotation .\n"
     "  ?annotation a up:Disease_Annotation ;\n    up:disease ?disease .\n}"),
    ("Count the proteins per organism",
     "SELECT ?organism (COUNT(?protein) AS ?count) WHERE {\n  ?protein a up:Protein ;\n    up:organism ?organism .\n}"
     "\nGROUP BY ?organism"),
    ("Select the scientific name of a taxon",
     "SELECT ?taxon ?name WHERE {\n  ?taxon a up:Taxon ;\n    up:scientificName ?name .\n}"),
    ("Find proteins with an enzyme classification",
     "SELECT ?protein ?enzyme WHERE {\n  ?protein a up:Protein ;\n    up:enzyme ?enzyme .\n}"),
    ("Retrieve the amino acid sequence of a protein",
     "SELECT ?protein ?value WHERE {\n  ?protein a up:Protein ;\n    up:sequence ?isoform .\n"
     "  ?isoform rdf:value ?value .\n}"),
    ("List the keywords used to classify proteins",
     "SELECT DISTINCT ?keyword ?label WHERE {\n  ?protein up:classifiedWith ?keyword .\n"
     "  ?keyword skos:prefLabel ?label .\n}"),
    ("Find the journal citations of a protein",
     "SELECT ?protein ?title WHERE {\n  ?protein a up:Protein ;\n    up:citation ?citation .\n"
     "  ?citation up:title ?title .\n}"),
    ("Get the mnemonic of every reviewed protein",
     "SELECT ?protein ?mnemonic WHERE {\n  ?protein a up:Protein ;\n    up:reviewed true ;\n"
     "    up:mnemonic ?mnemonic .\n}"),
    ("Select proteins with a subcellular location annotation",
     "SELECT ?protein ?location WHERE {\n  ?protein up:annotation ?annotation .\n"
     "  ?annotation a up:Subcellular_Location_Annotation ;\n    up:locatedIn ?location .\n}"),
    ("List the alternative names of diseases",
     "SELECT ?disease ?alt WHERE {\n  ?disease a up:Disease ;\n    skos:altLabel ?alt .\n}"),
    ("Find the locus names of genes",
     "SELECT ?gene ?locus WHERE {\n  ?gene a up:Gene ;\n    up:locusName ?locus .\n}"),
    ("Count reviewed proteins",
     "SELECT (COUNT(?protein) AS ?count) WHERE {\n  ?protein a up:Protein ;\n    up:reviewed true .\n}"),
    ("Get the mass of protein sequences",
     "SELECT ?sequence ?mass WHERE {\n  ?sequence a up:Simple_Sequence ;\n    up:mass ?mass .\n}"),
    ("Find the function annotations of a protein",
     "SELECT ?protein ?comment WHERE {\n  ?protein up:annotation ?annotation .\n"
     "  ?annotation a up:Function_Annotation ;\n    rdfs:comment ?comment .\n}"),
    ("List enzymes and their names",
     "SELECT ?enzyme ?name WHERE {\n  ?enzyme a up:Enzyme ;\n    skos:prefLabel ?name .\n}"),
    ("Select the parent taxa of a taxon",
     "SELECT ?taxon ?parent WHERE {\n  ?taxon a up:Taxon ;\n    rdfs:subClassOf ?parent .\n}"),
    ("Find domain annotations and their ranges",
     "SELECT ?annotation ?range WHERE {\n  ?annotation a up:Domain_Annotation ;\n    up:range ?range .\n}"),
    ("List the members of protein clusters",
     "SELECT ?cluster ?member WHERE {\n  ?cluster a up:Cluster ;\n    up:member ?member .\n}"),
    ("Get tissues and their cross-references",
     "SELECT ?tissue ?xref WHERE {\n  ?tissue a up:Tissue ;\n    rdfs:seeAlso ?xref .\n}"),
    ("Find proteins whose mnemonic starts with INS",
     "SELECT ?protein ?mnemonic WHERE {\n  ?protein a up:Protein ;\n    up:mnemonic ?mnemonic .\n"
     "  FILTER(STRSTARTS(?mnemonic, \"INS\"))\n}"),
    ("List orthologs of human proteins in OMA",
     "PREFIX orth: <http://purl.org/net/orth#>\nSELECT ?protein ?ortholog WHERE {\n"
     "  ?protein a up:Protein ;\n    up:organism taxon:9606 .\n"
     "  SERVICE <https://sparql.omabrowser.org/sparql> {\n    ?cluster a orth:OrthologsCluster ;\n"
     "      orth:hasHomologousMember ?ortholog .\n  }\n}"),
]


def example_rows(examples, base="https://sparql.uniprot.org/.well-known/sparql-examples/"):
    rows = []
    for i, (q, body) in enumerate(examples, 1):
        row = {"example": uri(base + str(i)), "query": lit(EX_PREFIX + body)}
        if q is not None:
            row["comment"] = lit(q)
        rows.append(row)
    return rows


def make_examples():
    assert len(EXAMPLES) == 25
    vars_ = ["example", "comment", "query"]
    write_json("examples/uniprot25.srj", results(vars_, example_rows(EXAMPLES)))
    write_json("examples/two.srj", results(vars_, example_rows(EXAMPLES[:2])))
    write_json("examples/three.srj", results(vars_, example_rows(EXAMPLES[:3])))
    write_json("examples/missing_comment.srj",
               results(vars_, example_rows([EXAMPLES[0], (None, EXAMPLES[1][1]), EXAMPLES[2]])))
    write_json("examples/empty.srj", results(vars_, []))


# ------------------------------------------------------------ homepage ----

def jsonld(doc):
    return '<script type="application/ld+json">\n' + json.dumps(doc, indent=2) + "\n</script>\n"


def make_homepages():
    uniprot = {"@context": "https://schema.org", "@type": "Dataset", "name": "UniProt",
               "description": "The UniProt knowledgebase is a large resource of protein sequences and "
                              "associated detailed annotation."}
    write("homepage/uniprot.html",
          "<!DOCTYPE html>\n<html>\n<head>\n<title>UniProt SPARQL endpoint</title>\n" + jsonld(uniprot) +
          "</head>\n<body><h1>UniProt SPARQL endpoint</h1></body>\n</html>\n")
    write("homepage/none.html", "<!DOCTYPE html>\n<html><head><title>Endpoint</title></head><body></body></html>\n")
    first = {"@context": "https://schema.org", "@type": "Dataset", "name": "First dataset",
             "description": "Described by the first block."}
    second = {"@context": "https://schema.org", "@type": "Dataset", "name": "Second dataset",
              "description": "Described by the second block."}
    write("homepage/two_blocks.html", "<html><head>\n" + jsonld(first) + jsonld(second) + "</head></html>\n")
    oma = {"@context": "https://schema.org", "@type": "Dataset", "name": "OMA Browser",
           "description": "Orthologous matrix: orthology inference between complete genomes."}
    write("homepage/oma.html", "<html><head>\n" + jsonld(oma) + "</head></html>\n")


# ------------------------------------------------------ knowledge base ----

def make_kb():
    write_json("kb/uniprot25.json", {
        "prefixes": PREFIXES,
        "endpoints": [{
            "iri": UNIPROT,
            "examples": "../examples/uniprot25.srj",
            "void": "../void/uniprot.srj",
            "labels": "../labels/uniprot.srj",
            "homepage": "../homepage/uniprot.html",
        }],
    })
    write_json("kb/uniprot3.json", {
        "prefixes": PREFIXES,
        "endpoints": [{
            "iri": UNIPROT,
            "examples": "../examples/three.srj",
            "void": "../void/uniprot.srj",
            "labels": "../labels/uniprot.srj",
            "homepage": "../homepage/uniprot.html",
        }],
    })
    write_json("kb/federated.json", {
        "prefixes": PREFIXES,
        "endpoints": [
            {"iri": UNIPROT, "examples": "../examples/uniprot25.srj", "void": "../void/uniprot.srj",
             "labels": "../labels/uniprot.srj", "homepage": "../homepage/uniprot.html"},
            {"iri": OMA, "examples": "../examples/empty.srj", "void": "../void/oma.srj",
             "labels": "../labels/oma.srj", "homepage": "../homepage/oma.html"},
        ],
    })


# -------------------------------------------------------------- golden ----

def make_golden():
    # Disease_Annotation shape in the canonical layout: one predicate per line,
    # " ;" separators, closing brace on its own line, no trailing newline.
    write("golden/disease_annotation.shex",
          "up:Disease_Annotation {\n"
          "  a [ up:Disease_Annotation ] ;\n"
          "  up:sequence [ up:Chain_Annotation up:Modified_Sequence ] ;\n"
          "  rdfs:comment xsd:string ;\n"
          "  up:disease IRI\n"
          "}")
    # One predicate of each object kind (class list, datatype, IRI, Literal),
    # ordered by descending triple count.
    write("golden/all_kinds.shex",
          "ex:Thing {\n"
          "  a [ ex:Thing ] ;\n"
          "  ex:linksTo [ ex:Other ex:Thing ] ;\n"
          "  ex:count xsd:integer ;\n"
          "  ex:page IRI ;\n"
          "  ex:note Literal ;\n"
          "  <http://other.example/x#p> [ <http://other.example/x#Unknown> ] xsd:string IRI Literal\n"
          "}")
    write("golden/disease_message.txt",
          "Subject ?disease with type up:Disease in endpoint https://sparql.uniprot.org/sparql does not support "
          "the predicate rdfs:label. It can have the following predicates: skos:altLabel, rdfs:comment, "
          "up:mnemonic, skos:prefLabel, rdfs:seeAlso")


# --------------------------------------------------------------- prompt ---

def render_template(text, vars_):
    """Mirror of the documented template rules."""
    messages = []
    current = None
    for line in text.split("\n"):
        if line in ("[system]", "[user]", "[assistant]"):
            if current is not None:
                messages.append(current)
            current = [line[1:-1], []]
        elif current is not None:
            current[1].append(line)
    if current is not None:
        messages.append(current)
    out = []
    for role, lines in messages:
        content = "\n".join(lines)
        for k, v in vars_.items():
            content = content.replace("{{" + k + "}}", v)
        out.append({"role": role, "content": content.strip("\n")})
    return out


def make_prompt_golden():
    here = os.path.dirname(os.path.abspath(__file__))
    with open(os.path.join(here, "..", "prompts", "generate.txt"), encoding="utf-8") as f:
        template = f.read()
    context = {
        "question": "Which diseases are associated with the protein INS?",
        "examples": [
            ("Find diseases and their preferred names",
             "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?disease ?name WHERE {\n"
             "  ?disease a up:Disease ;\n    skos:prefLabel ?name .\n}", UNIPROT, 0.82),
            ("List proteins annotated with a disease",
             "#+ endpoint: https://sparql.uniprot.org/sparql\nSELECT ?protein WHERE {\n"
             "  ?protein up:annotation ?a .\n}", UNIPROT, 0.75),
        ],
        "shapes": [
            ("Disease", "up:Disease {\n  a [ up:Disease ] ;\n  skos:prefLabel xsd:string\n}", UNIPROT, 0.7),
        ],
        "endpoint_info": ("Endpoint: https://sparql.uniprot.org/sparql\nUniProt\nProtein sequences.", UNIPROT, 0.4),
    }
    write_json("golden/prompt_context.json", {
        "question": context["question"],
        "examples": [{"question": q, "query": b, "endpoint": e, "score": s} for q, b, e, s in context["examples"]],
        "shapes": [{"label": l, "shex": x, "endpoint": e, "score": s} for l, x, e, s in context["shapes"]],
        "endpoint_info": {"text": context["endpoint_info"][0], "endpoint": context["endpoint_info"][1],
                          "score": context["endpoint_info"][2]},
    })

    def example_block(q, body, endpoint):
        if "#+ endpoint:" not in body:
            body = "#+ endpoint: " + endpoint + "\n" + body
        return q + "\n```sparql\n" + body + "\n```"

    examples = "\n\n".join(example_block(q, b, e) for q, b, e, _ in context["examples"])
    shapes = "\n\n".join("```shex\n" + x + "\n```" for _, x, _, _ in context["shapes"])
    messages = render_template(template, {
        "endpoint_info": context["endpoint_info"][0],
        "examples": examples,
        "shapes": shapes,
        "question": context["question"],
    })
    write("golden/prompt.txt", "".join("[" + m["role"] + "]\n" + m["content"] + "\n" for m in messages))


# ---------------------------------------------------------------- LLM -----

def answer(query, endpoint=UNIPROT, prose="Here is a query that answers the question."):
    return prose + "\n\n```sparql\n#+ endpoint: " + endpoint + "\n" + query + "\n```"


WRONG_DISEASE = ("PREFIX up: <http://purl.uniprot.org/core/>\n"
                 "SELECT ?disease ?label WHERE {\n  ?disease a up:Disease ;\n    rdfs:label ?label .\n}")
FIXED_DISEASE = ("PREFIX up: <http://purl.uniprot.org/core/>\n"
                 "SELECT ?disease ?label WHERE {\n  ?disease a up:Disease ;\n    skos:prefLabel ?label .\n}")


def make_llm():
    write_json("llm/wrong_then_fixed.json", {
        "model": "mock-small",
        "responses": [answer(WRONG_DISEASE), answer(FIXED_DISEASE, prose="Corrected query:")],
    })
    write_json("llm/always_valid.json", {"model": "mock-small", "responses": [answer(FIXED_DISEASE)]})
    write_json("llm/always_wrong.json", {"model": "mock-small", "responses": [answer(WRONG_DISEASE)]})
    write_json("llm/echo.json", {"model": "mock-echo", "responses": [{"echo": True}]})
    write_json("llm/failing.json", {"model": "mock-small", "responses": [{"error": 503, "message": "overloaded"}]})


# --------------------------------------------------------------- eval -----

def bindings(vars_, rows):
    out = []
    for r in rows:
        b = {}
        for v, val in zip(vars_, r):
            if val is None:
                continue
            b[v] = uri(val) if val.startswith("http") else lit(val)
        out.append(b)
    return results(vars_, out)


def ref_query(n):
    return ("PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?protein ?name WHERE {\n"
            "  ?protein a up:Protein ;\n    up:mnemonic ?name .\n}\nLIMIT " + str(100 + n))


def gen_query(n, limit):
    return ("PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?p ?m WHERE {\n"
            "  ?p a up:Protein ;\n    up:mnemonic ?m .\n}\nLIMIT " + str(limit))


def rows_for(n, count=3):
    return [[UP.replace("core/", "uniprot/") + "P%03d%02d" % (n, i), "PROT%d_%d" % (n, i)] for i in range(count)]


def make_eval():
    # 13 cases. Category plan per case, identical across runs:
    # 1-7 Success, 8-9 Different Result, 10-11 No Result, 12 Error (no query),
    # 13 Error (endpoint rejects the generated query).
    plan = ["success"] * 7 + ["different"] * 2 + ["noresult"] * 2 + ["noquery", "rejected"]
    cases, routes, rules = [], [], []
    for n, kind in enumerate(plan, 1):
        question = "Evaluation question %02d: list protein mnemonics, variant %d" % (n, n)
        cases.append({"id": "q%02d" % n, "question": question, "reference_query": ref_query(n),
                      "endpoint": UNIPROT})
        ref_rows = rows_for(n)
        routes.append({"contains": "LIMIT %d" % (100 + n), "results": bindings(["protein", "name"], ref_rows)})
        gen_limit = 200 + n
        if kind == "success":
            routes.append({"contains": "LIMIT %d" % gen_limit,
                           "results": bindings(["p", "m"], list(reversed(ref_rows)))})
        elif kind == "different":
            routes.append({"contains": "LIMIT %d" % gen_limit, "results": bindings(["p", "m"], ref_rows[:1])})
        elif kind == "noresult":
            routes.append({"contains": "LIMIT %d" % gen_limit, "results": bindings(["p", "m"], [])})
        elif kind == "rejected":
            routes.append({"contains": "LIMIT %d" % gen_limit, "status": 400, "body": "Parse error",
                           "content_type": "text/plain"})
        if kind == "noquery":
            response = {"content": "I cannot answer this question with the available endpoints.",
                        "prompt_tokens": 1000, "completion_tokens": 12}
        else:
            response = {"content": answer(gen_query(n, gen_limit)), "prompt_tokens": 1000 + n,
                        "completion_tokens": 50}
        rules.append({"when_contains": question, "responses": [response]})
    write_json("eval/cases13.json", {"cases": cases})
    write_json("eval/stub13.json", {"endpoints": {"/uniprot": {"routes": routes}}})
    write_json("eval/llm13.json", {"model": "mock-small", "rules": rules,
                                   "responses": ["No query for unknown questions."]})

    # Four cases engineered to land in one category each.
    cases4, routes4, rules4 = [], [], []
    kinds = [("success", "Which proteins are encoded by the INS gene?"),
             ("different", "Which proteins are reviewed?"),
             ("noresult", "Which proteins have the mnemonic NOPE_HUMAN?"),
             ("error", "Which proteins are in the unreachable graph?")]
    for n, (kind, question) in enumerate(kinds, 1):
        cid = "c%d" % n
        cases4.append({"id": cid, "question": question, "reference_query": ref_query(20 + n),
                       "endpoint": UNIPROT})
        ref_rows = rows_for(20 + n, 4)
        routes4.append({"contains": "LIMIT %d" % (120 + n), "results": bindings(["protein", "name"], ref_rows)})
        gen_limit = 220 + n
        if kind == "success":
            # Renamed variables, swapped columns and permuted rows.
            permuted = [ref_rows[i] for i in (2, 0, 3, 1)]
            routes4.append({"contains": "LIMIT %d" % gen_limit,
                            "results": bindings(["m", "p"], [[r[1], r[0]] for r in permuted])})
        elif kind == "different":
            routes4.append({"contains": "LIMIT %d" % gen_limit,
                            "results": bindings(["p", "m"], ref_rows[:2] + [[UP + "X", "EXTRA"]])})
        elif kind == "noresult":
            routes4.append({"contains": "LIMIT %d" % gen_limit, "results": bindings(["p", "m"], [])})
        else:
            routes4.append({"contains": "LIMIT %d" % gen_limit, "status": 500, "body": "Internal error",
                            "content_type": "text/plain"})
        rules4.append({"when_contains": question, "responses": [
            {"content": answer(gen_query(20 + n, gen_limit)), "prompt_tokens": 2000, "completion_tokens": 100}]})
    write_json("eval/cases4.json", {"cases": cases4})
    write_json("eval/stub4.json", {"endpoints": {"/uniprot": {"routes": routes4}}})
    write_json("eval/llm4.json", {"model": "mock-small", "rules": rules4, "responses": ["no query"]})
    write_json("eval/prices.json", {"mock-small": {"prompt": 0.000001, "completion": 0.000002}})

    # Golden table for the 4-case fixture, one run, RAG w/ validation.
    # Price per run: 2000 * 1e-6 + 100 * 2e-6 = 0.0022. F1: success 1, others 0
    # except "different": 2 common rows of 3 generated / 4 reference:
    # P = 2/3, R = 1/2, F1 = 4/7. Mean F1 = (1 + 4/7) / 4 = 0.392857...
    write("golden/report4.md",
          "| Model | Approach | Success | Different Result | No Result | Error | Price ($) | F1 |\n"
          "|---|---|---:|---:|---:|---:|---:|---:|\n"
          "| mock-small | RAG w/ validation | 1 | 1 | 1 | 1 | 0.0022 | 0.39 |\n")


# -------------------------------------------------------------- stubs -----

def make_stub_endpoints():
    # Metadata probes: one endpoint with examples and VoID, one with VoID only,
    # one that fails everything.
    examples = results(["example", "comment", "query"], example_rows(EXAMPLES[:2]))
    void = results(VOID_VARS, schema_rows([s for s in UNIPROT_SCHEMA if s[0] == "up:Disease"]))
    with open(os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "queries", "examples.rq")) as f:
        _ = f.read()
    uniprot_home = open(os.path.join(ROOT, "homepage", "uniprot.html"), encoding="utf-8").read()
    write_json("stub/metadata.json", {"endpoints": {
        "/full": {"homepage": uniprot_home, "routes": [
            {"contains": "sh:SPARQLExecutable", "results": examples},
            {"contains": "void:propertyPartition", "results": void},
        ]},
        "/void-only": {"routes": [
            {"contains": "sh:SPARQLExecutable", "results": results(["example", "comment", "query"], [])},
            {"contains": "void:propertyPartition", "results": void},
        ]},
        "/broken": {"routes": [], "default": {"status": 500, "body": "Internal Server Error"}},
    }})


# ------------------------------------------------------------- corpus -----

CORPUS = {
    "01_empty.rq": "SELECT * WHERE {}",
    "02_disease.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?disease ?label WHERE {\n"
                     "  ?disease a up:Disease ; rdfs:label ?label\n}",
    "03_ask.rq": "ASK { ?s ?p ?o }",
    "04_optional.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?protein ?gene WHERE {\n"
                      "  ?protein a up:Protein .\n  OPTIONAL { ?protein up:encodedBy ?gene . }\n}",
    "05_union.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?x WHERE {\n"
                   "  { ?x a up:Protein } UNION { ?x a up:Gene } UNION { ?x a up:Taxon }\n}",
    "06_filter.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?p ?m WHERE {\n"
                    "  ?p up:mnemonic ?m .\n  FILTER(REGEX(?m, \"^INS\", \"i\") && STRLEN(?m) > 3)\n}",
    "07_values.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?p WHERE {\n"
                    "  VALUES (?p ?x) { (<http://purl.uniprot.org/uniprot/P01308> 1) (UNDEF 2) }\n"
                    "  ?p a up:Protein .\n}",
    "08_service.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nPREFIX orth: <http://purl.org/net/orth#>\n"
                     "SELECT ?p ?o WHERE {\n  ?p a up:Protein .\n"
                     "  SERVICE <https://sparql.omabrowser.org/sparql> {\n"
                     "    ?c a orth:OrthologsCluster ; orth:hasHomologousMember ?o .\n  }\n}",
    "09_service_silent_var.rq": "SELECT * WHERE {\n  SERVICE SILENT ?endpoint { ?s ?p ?o }\n}",
    "10_subquery.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?org ?n WHERE {\n"
                      "  { SELECT ?org (COUNT(?p) AS ?n) WHERE { ?p up:organism ?org } GROUP BY ?org }\n"
                      "  FILTER(?n > 10)\n}\nORDER BY DESC(?n)\nLIMIT 10",
    "11_path.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?t WHERE {\n"
                  "  ?t rdfs:subClassOf+ <http://purl.uniprot.org/taxonomy/40674> .\n"
                  "  ?p up:organism/rdfs:subClassOf* ?t .\n}",
    "12_path_alt.rq": "SELECT ?x ?y WHERE {\n  ?x (rdfs:label|skos:prefLabel) ?y .\n"
                      "  ?x ^rdfs:seeAlso/!(rdf:type|rdfs:label) ?z .\n}",
    "13_bind.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?p ?len WHERE {\n"
                  "  ?p up:sequence ?s .\n  ?s rdf:value ?v .\n  BIND(STRLEN(?v) AS ?len)\n}",
    "14_not_exists.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?p WHERE {\n"
                        "  ?p a up:Protein .\n  FILTER NOT EXISTS { ?p up:encodedBy ?g }\n}",
    "15_exists.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?p WHERE {\n"
                    "  ?p a up:Protein .\n  FILTER EXISTS { ?p up:reviewed true }\n}",
    "16_blank_nodes.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT ?p ?name WHERE {\n"
                         "  ?p up:annotation [ a up:Disease_Annotation ; up:disease [ skos:prefLabel ?name ] ] .\n"
                         "  _:b0 ?x ?p .\n}",
    "17_literals.rq": "SELECT * WHERE {\n  ?s ?p \"chat\"@fr, 'single', \"\"\"long\nstring\"\"\", 42, -3.5, 1e10, true,"
                      " \"2020-01-01\"^^xsd:date, \"tab\\there\" .\n}",
    "18_nested_service.rq": "SELECT * WHERE {\n  ?a ?b ?c .\n  SERVICE <http://a.example/sparql> {\n"
                            "    ?d ?e ?f .\n    SERVICE <http://b.example/sparql> { ?g ?h ?i . }\n  }\n}",
    "19_modifiers.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT DISTINCT ?org (COUNT(DISTINCT ?p) AS ?n)"
                       " WHERE {\n  ?p up:organism ?org .\n}\nGROUP BY ?org\nHAVING(COUNT(?p) > 2)\n"
                       "ORDER BY ?org\nLIMIT 5\nOFFSET 10",
    "20_base.rq": "BASE <http://example.org/>\nPREFIX ex: <http://example.org/ns#>\nSELECT ?s WHERE {\n"
                  "  ?s ex:rel <relative> .\n}",
    "21_comments.rq": "# leading comment\nPREFIX up: <http://purl.uniprot.org/core/> # trailing\n"
                      "SELECT ?p WHERE { # inside\n  ?p a up:Protein . # end\n  ?p up:mnemonic \"not # a comment\" .\n}",
    "22_group_nesting.rq": "SELECT * WHERE {\n  { ?a ?b ?c . { ?d ?e ?f } }\n  OPTIONAL { { ?g ?h ?i } UNION { ?j ?k ?l } }\n"
                           "  ?m ?n ?o .\n}",
    "23_values_trailing.rq": "SELECT ?x WHERE { ?x ?p ?o }\nVALUES ?x { <http://a.example/1> <http://a.example/2> }",
    "24_federated_full.rq": "PREFIX up: <http://purl.uniprot.org/core/>\nPREFIX orth: <http://purl.org/net/orth#>\n"
                            "SELECT ?protein ?label WHERE {\n  ?protein a up:Protein ; up:organism ?org .\n"
                            "  OPTIONAL { ?protein up:encodedBy ?gene . ?gene skos:prefLabel ?label }\n"
                            "  SERVICE <https://sparql.omabrowser.org/sparql> {\n"
                            "    { ?c orth:hasHomologousMember ?m } UNION { ?m a orth:Protein }\n"
                            "    FILTER(?m != ?protein)\n  }\n}",
}


def make_corpus():
    for name, text in CORPUS.items():
        write("queries/" + name, text + "\n")


def main():
    make_void()
    make_labels()
    make_examples()
    make_homepages()
    make_kb()
    make_golden()
    make_prompt_golden()
    make_llm()
    make_eval()
    make_stub_endpoints()
    make_corpus()
    return 0


if __name__ == "__main__":
    sys.exit(main())
