use serde::{Deserialize, Serialize};

use crate::cobol::{AstIndex, CmpOp, CobolAst, Condition, Literal, Operand, Statement, StatementKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActionLabel {
    LoopToFor,
    LoopToWhile,
    LoopToDoWhile,
    IfToIf,
    IfChainToSwitch,
    EvaluateToSwitch,
    MoveToAssign,
    ComputeToExpr,
    CallToMethodCall,
    DisplayToPrint,
    /// Split the enclosing method at this pre-order node.
    ExtractMethodAt(usize),
    PassThrough,
}

impl ActionLabel {
    /// Number of classifier outputs; all split offsets share one class.
    pub const CLASS_COUNT: usize = 12;

    pub const CLASS_NAMES: [&'static str; Self::CLASS_COUNT] = [
        "LoopToFor",
        "LoopToWhile",
        "LoopToDoWhile",
        "IfToIf",
        "IfChainToSwitch",
        "EvaluateToSwitch",
        "MoveToAssign",
        "ComputeToExpr",
        "CallToMethodCall",
        "DisplayToPrint",
        "ExtractMethodAt",
        "PassThrough",
    ];

    pub fn class(self) -> usize {
        match self {
            ActionLabel::LoopToFor => 0,
            ActionLabel::LoopToWhile => 1,
            ActionLabel::LoopToDoWhile => 2,
            ActionLabel::IfToIf => 3,
            ActionLabel::IfChainToSwitch => 4,
            ActionLabel::EvaluateToSwitch => 5,
            ActionLabel::MoveToAssign => 6,
            ActionLabel::ComputeToExpr => 7,
            ActionLabel::CallToMethodCall => 8,
            ActionLabel::DisplayToPrint => 9,
            ActionLabel::ExtractMethodAt(_) => 10,
            ActionLabel::PassThrough => 11,
        }
    }

    /// Inverse of [`class`](Self::class); the split class is bound to `node`.
    pub fn from_class(class: usize, node: usize) -> Option<Self> {
        Some(match class {
            0 => ActionLabel::LoopToFor,
            1 => ActionLabel::LoopToWhile,
            2 => ActionLabel::LoopToDoWhile,
            3 => ActionLabel::IfToIf,
            4 => ActionLabel::IfChainToSwitch,
            5 => ActionLabel::EvaluateToSwitch,
            6 => ActionLabel::MoveToAssign,
            7 => ActionLabel::ComputeToExpr,
            8 => ActionLabel::CallToMethodCall,
            9 => ActionLabel::DisplayToPrint,
            10 => ActionLabel::ExtractMethodAt(node),
            11 => ActionLabel::PassThrough,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        Self::CLASS_NAMES[self.class()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Action {
    pub stmt_ref: usize,
    pub action: ActionLabel,
}

impl Action {
    pub fn new(stmt_ref: usize, action: ActionLabel) -> Self {
        Self { stmt_ref, action }
    }
}

/// The fixed rule table.
pub fn default_action(kind: &StatementKind) -> ActionLabel {
    match kind {
        StatementKind::PerformTimes { .. } | StatementKind::PerformVarying { .. } => ActionLabel::LoopToFor,
        StatementKind::PerformUntil { .. } => ActionLabel::LoopToWhile,
        StatementKind::If { .. } => ActionLabel::IfToIf,
        StatementKind::Evaluate { .. } => ActionLabel::EvaluateToSwitch,
        StatementKind::Move { .. } => ActionLabel::MoveToAssign,
        StatementKind::Compute { .. } | StatementKind::Arith { .. } => ActionLabel::ComputeToExpr,
        StatementKind::Call { .. } | StatementKind::PerformPara { .. } => ActionLabel::CallToMethodCall,
        StatementKind::Display { .. } => ActionLabel::DisplayToPrint,
        StatementKind::Accept { .. } | StatementKind::GoTo { .. } | StatementKind::StopRun => ActionLabel::PassThrough,
    }
}

/// One action per statement node, in pre-order.
pub fn default_actions(ast: &CobolAst) -> Vec<Action> {
    let index = AstIndex::build(ast);
    index
        .statement_nodes()
        .map(|n| Action::new(n.index, default_action(&n.stmt.expect("statement").kind)))
        .collect()
}

/// Whether `label` fits the statement's shape. Type-dependent conditions
/// (switch subjects and literals) are checked during translation.
pub fn shape_allows(label: ActionLabel, kind: &StatementKind) -> bool {
    use StatementKind as K;
    match label {
        ActionLabel::PassThrough | ActionLabel::ExtractMethodAt(_) => true,
        ActionLabel::LoopToFor => matches!(kind, K::PerformTimes { .. } | K::PerformVarying { .. } | K::PerformUntil { .. }),
        ActionLabel::LoopToWhile | ActionLabel::LoopToDoWhile => {
            matches!(kind, K::PerformVarying { .. } | K::PerformUntil { .. })
        }
        ActionLabel::IfToIf => matches!(kind, K::If { .. }),
        ActionLabel::IfChainToSwitch => if_chain(kind).is_some_and(|c| c.members.len() >= 2),
        ActionLabel::EvaluateToSwitch => matches!(kind, K::Evaluate { .. }),
        ActionLabel::MoveToAssign => matches!(kind, K::Move { .. }),
        ActionLabel::ComputeToExpr => matches!(kind, K::Compute { .. } | K::Arith { .. }),
        ActionLabel::CallToMethodCall => matches!(kind, K::Call { .. } | K::PerformPara { .. }),
        ActionLabel::DisplayToPrint => matches!(kind, K::Display { .. }),
    }
}

/// An IF / ELSE IF chain testing one variable for equality with literals.
#[derive(Debug)]
pub struct IfChain<'a> {
    pub subject: &'a str,
    pub members: Vec<(&'a Literal, &'a [Statement])>,
    /// The If statements absorbed after the head.
    pub nested: Vec<&'a Statement>,
    pub otherwise: &'a [Statement],
}

fn equality_test(cond: &Condition) -> Option<(&str, &Literal)> {
    match cond {
        Condition::Compare { op: CmpOp::Eq, lhs: Operand::Name(n), rhs: Operand::Lit(l) }
        | Condition::Compare { op: CmpOp::Eq, lhs: Operand::Lit(l), rhs: Operand::Name(n) } => Some((n, l)),
        _ => None,
    }
}

pub fn if_chain(kind: &StatementKind) -> Option<IfChain<'_>> {
    let StatementKind::If { cond, then_branch, else_branch } = kind else { return None };
    let (subject, lit) = equality_test(cond)?;
    let mut chain = IfChain { subject, members: vec![(lit, then_branch)], nested: Vec::new(), otherwise: else_branch };
    loop {
        let [next] = chain.otherwise else { break };
        let StatementKind::If { cond, then_branch, else_branch } = &next.kind else { break };
        match equality_test(cond) {
            Some((s, l)) if s == subject => {
                chain.members.push((l, then_branch));
                chain.nested.push(next);
                chain.otherwise = else_branch;
            }
            _ => break,
        }
    }
    Some(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobol::parse_str;

    #[test]
    fn class_round_trip() {
        for c in 0..ActionLabel::CLASS_COUNT {
            let l = ActionLabel::from_class(c, 7).unwrap();
            assert_eq!(l.class(), c);
            assert_eq!(l.name(), ActionLabel::CLASS_NAMES[c]);
        }
        assert_eq!(ActionLabel::from_class(12, 0), None);
    }

    #[test]
    fn default_table() {
        let src = "IDENTIFICATION DIVISION. PROGRAM-ID. T. PROCEDURE DIVISION. MAIN.
            PERFORM 3 TIMES MOVE 1 TO A END-PERFORM. PERFORM UNTIL A > 1 COMPUTE A = A + 1 END-PERFORM.
            GO TO MAIN.";
        let ast = parse_str(src).unwrap();
        let labels: Vec<_> = default_actions(&ast).into_iter().map(|a| (a.stmt_ref, a.action)).collect();
        use ActionLabel::*;
        assert_eq!(
            labels,
            vec![(2, LoopToFor), (3, MoveToAssign), (4, LoopToWhile), (5, ComputeToExpr), (6, PassThrough)]
        );
        let empty = parse_str("IDENTIFICATION DIVISION. PROGRAM-ID. E. PROCEDURE DIVISION.").unwrap();
        assert!(default_actions(&empty).is_empty());
    }

    #[test]
    fn chain_detection() {
        let src = "IDENTIFICATION DIVISION. PROGRAM-ID. T. PROCEDURE DIVISION. MAIN.
            IF X = 1 DISPLAY 'A' ELSE IF X = 2 DISPLAY 'B' ELSE DISPLAY 'C' END-IF END-IF.";
        let ast = parse_str(src).unwrap();
        let chain = if_chain(&ast.paragraphs[0].statements[0].kind).unwrap();
        assert_eq!(chain.subject, "X");
        assert_eq!(chain.members.len(), 2);
        assert_eq!(chain.otherwise.len(), 1);
        assert!(shape_allows(ActionLabel::IfChainToSwitch, &ast.paragraphs[0].statements[0].kind));
        assert!(!shape_allows(ActionLabel::LoopToFor, &ast.paragraphs[0].statements[0].kind));
    }

    #[test]
    fn serde_shape() {
        let a = Action::new(5, ActionLabel::ExtractMethodAt(5));
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"stmt_ref":5,"action":{"ExtractMethodAt":5}}"#);
        let b: Action = serde_json::from_str(r#"{"stmt_ref":2,"action":"LoopToFor"}"#).unwrap();
        assert_eq!(b.action, ActionLabel::LoopToFor);
    }
}
